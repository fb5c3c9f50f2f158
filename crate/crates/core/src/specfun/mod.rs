//! Special-function kernel.
//!
//! Everything here is a pure function of its arguments. The series-based
//! routines take a [`SeriesControl`] and report how many terms they used
//! together with a bound on the discarded tail.

mod bessel;
mod gamma;
mod hyper;
mod marcum;
pub mod quad;

pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i};
pub use gamma::{gamma_p, gamma_q, log_gamma, upper_incomplete_gamma};
pub use hyper::{gauss_2f1, regularized_beta};
pub use marcum::{marcum_p, marcum_q, marcum_q_reference};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Truncation policy shared by every infinite series in the crate.
///
/// A series stops once its estimated tail is at most
/// `max(abs_tol, rel_tol * |partial sum|)`, and fails with
/// [`Error::NonConvergence`] if `max_terms` is reached first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        let ctl = SeriesControl {
            abs_tol,
            rel_tol,
            max_terms,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_terms < 1 {
            return Err(Error::InvalidParameter(format!(
                "series control needs abs_tol > 0, rel_tol > 0, max_terms >= 1 (got {:?})",
                self
            )));
        }
        Ok(())
    }

    /// Tolerance a tail estimate must fall under given the current sum.
    #[inline]
    pub fn threshold(&self, partial_sum: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * partial_sum.abs())
    }
}

/// Value of a truncated series with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    /// Upper estimate of the discarded tail.
    pub est_error: f64,
}

/// Binomial coefficient C(n, k) for integers, zero when k < 0 or k > n.
pub fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
