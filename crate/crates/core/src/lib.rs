// `!(a < b)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic_engine;
pub mod biorthogonality;
pub mod error;
pub mod operator_engine;
pub mod quad;
pub mod report;
pub mod special_fn;
pub mod spectral_checks;
pub mod zero_finder;

pub use error::{Error, Result};
