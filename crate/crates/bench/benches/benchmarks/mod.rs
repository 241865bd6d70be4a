pub mod hsic;
pub mod ident;
pub mod objective;
pub mod survey;
