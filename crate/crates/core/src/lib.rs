//! Generic identifiability of direct causal effects in linear non-Gaussian
//! structural equation models over mixed graphs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admg;
pub mod error;
pub mod estimate;
pub mod fixtures;
pub mod ident;
pub mod oracle;
pub mod params;
pub mod simulate;
pub mod survey;
pub mod verify;

pub use admg::{GraphDoc, LatentFactorGraph, MixedGraph, VertexSet};
pub use error::{Error, Result};
pub use ident::IdentReport;
pub use params::{normalized_frobenius_loss, ParamMatrix};
pub use simulate::Dataset;
