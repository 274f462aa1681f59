//! Exact influence analysis for polynomial threshold functions on the
//! boolean hypercube `{-1,1}^n`.

pub mod boolean;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod family;
pub mod graphs;
pub mod lp;
pub mod qtf;
pub mod search;
pub mod spectral;
pub mod symmetry;

pub use boolean::{BooleanFunction, TernaryFunction};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
