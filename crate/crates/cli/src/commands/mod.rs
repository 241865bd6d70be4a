pub mod check;
pub mod estimate;
pub mod flow;
pub mod simulate;
pub mod survey;
pub mod verify;
