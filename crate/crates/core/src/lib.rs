// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Test oracles keep every digit they were computed with.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cli;
pub mod error;
pub mod estimate;
pub mod fading;
pub mod montecarlo;
pub mod rng;
pub mod secrecy;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
