//! Finite-sum SPSC for integer μ_M, μ_E.
//!
//! With A = sqrt(2κ_E μ_E), B = sqrt(2κ_M μ_M), r = sqrt(β_M / β_E),
//! R = r + 1/r, μ = μ_E - 1 and v = μ_M - 1:
//!
//! ```text
//! P_0 = 1 - P' - e^{-(A²r + B²/r)/(2R)} Σ_{m=-μ}^{v} (A/(Br))^m I_m(AB/R) · S_m
//! S_m = Σ_{k=1}^{μ} C(v+k, k+m) r^{v-k+1} R^{-v-k-1} - Σ_{j=1}^{v} C(j, m) r^{j-1} R^{-j-1}
//! P'  = Q_1(Ar/sqrt(1+r²), B/sqrt(1+r²)) - e^{-(A²r² + B²)/(2(1+r²))} I_0(ABr/(1+r²)) / (1+r²)
//! ```
//!
//! The sign in front of the m-sum is negative. Empty k- or j-sums are zero.

use super::series::double_series;
use super::{EvalResult, Method, WiretapPair};
use crate::error::{Error, Result};
use crate::specfun::{binomial, bessel_i_scaled, marcum_q, SeriesControl};
use serde::{Deserialize, Serialize};

/// Below this κ on either link the closed form is ill-conditioned and the
/// series engine is used instead.
pub const CLOSED_FORM_KAPPA_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParams {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    /// r + 1/r
    pub r_sum: f64,
    /// μ_E - 1
    pub mu_idx: u32,
    /// μ_M - 1
    pub v_idx: u32,
}

fn integer_index(mu: f64, which: &str) -> Result<u32> {
    if mu >= 1.0 && mu == mu.round() && mu < u32::MAX as f64 {
        Ok(mu as u32 - 1)
    } else {
        Err(Error::domain(
            "spsc_closed_form",
            format!("{which} = {mu} must be a positive integer"),
        ))
    }
}

impl ClosedFormParams {
    pub fn new(pair: &WiretapPair) -> Result<Self> {
        pair.validate()?;
        let mu_idx = integer_index(pair.eve.mu, "mu_E")?;
        let v_idx = integer_index(pair.main.mu, "mu_M")?;
        let r = (pair.main.beta() / pair.eve.beta()).sqrt();
        Ok(ClosedFormParams {
            a: (2.0 * pair.eve.alpha()).sqrt(),
            b: (2.0 * pair.main.alpha()).sqrt(),
            r,
            r_sum: r + 1.0 / r,
            mu_idx,
            v_idx,
        })
    }

    fn bracket(&self, m: i64) -> f64 {
        let v = self.v_idx as i64;
        let (r, rs) = (self.r, self.r_sum);
        let mut s = 0.0;
        for k in 1..=self.mu_idx as i64 {
            let c = binomial(v + k, k + m);
            if c != 0.0 {
                s += c * r.powi((v - k + 1) as i32) * rs.powi((-v - k - 1) as i32);
            }
        }
        for j in 1..=v {
            let c = binomial(j, m);
            if c != 0.0 {
                s -= c * r.powi((j - 1) as i32) * rs.powi((-j - 1) as i32);
            }
        }
        s
    }
}

/// The exponentially weighted m-sum over `m_lo..=m_hi`, returned with the
/// sum of absolute terms. Terms whose binomial bracket vanishes contribute
/// exactly zero, so any range containing `-μ..=v` gives the same value.
pub fn closed_form_m_sum(cf: &ClosedFormParams, m_lo: i64, m_hi: i64) -> Result<(f64, f64)> {
    let (a, b, r, rs) = (cf.a, cf.b, cf.r, cf.r_sum);
    let x = a * b / rs;
    // e^{-(A²r + B²/r)/(2R)} e^{x} = e^{-(A sqrt(r) - B / sqrt(r))² / (2R)}
    let d = a * r.sqrt() - b / r.sqrt();
    let ln_env = -d * d / (2.0 * rs);
    let ln_ratio = a.ln() - b.ln() - r.ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for m in m_lo..=m_hi {
        let bracket = cf.bracket(m);
        if bracket == 0.0 {
            continue;
        }
        let ln_mag = m as f64 * ln_ratio + ln_env + bessel_i_scaled(m.unsigned_abs() as f64, x)?.ln();
        let term = bracket * ln_mag.exp();
        sum += term;
        abs_sum += term.abs();
    }
    Ok((sum, abs_sum))
}

/// SPSC for positive-integer μ_M, μ_E as a finite sum plus one Marcum Q_1.
///
/// When either κ is below [`CLOSED_FORM_KAPPA_MIN`] the result comes from
/// the series engine and carries [`Method::Series`].
pub fn spsc_closed_form(pair: &WiretapPair) -> Result<EvalResult> {
    let cf = ClosedFormParams::new(pair)?;
    let ctl = SeriesControl::new(1e-15, 1e-14, 100_000)?;
    if pair.main.kappa < CLOSED_FORM_KAPPA_MIN || pair.eve.kappa < CLOSED_FORM_KAPPA_MIN {
        let s = double_series(&pair.main, &pair.eve, 1.0, &SeriesControl::default())?;
        return Ok(EvalResult {
            value: s.value.clamp(0.0, 1.0),
            terms_k: s.terms_k,
            terms_l: s.terms_l,
            est_error: s.est_error,
            method: Method::Series,
        });
    }
    let (a, b, r) = (cf.a, cf.b, cf.r);
    let s2 = 1.0 + r * r;
    let q = marcum_q(1.0, a * r / s2.sqrt(), b / s2.sqrt(), &ctl)?;
    let x0 = a * b * r / s2;
    let p_prime = q.value - (-(a * r - b).powi(2) / (2.0 * s2)).exp() * bessel_i_scaled(0.0, x0)? / s2;
    let (m_sum, abs_sum) = closed_form_m_sum(&cf, -(cf.mu_idx as i64), cf.v_idx as i64)?;
    let value = 1.0 - p_prime - m_sum;
    Ok(EvalResult {
        value: value.clamp(0.0, 1.0),
        terms_k: (cf.mu_idx + cf.v_idx + 1) as usize,
        terms_l: q.terms,
        est_error: q.est_error + 8.0 * f64::EPSILON * (1.0 + abs_sum),
        method: Method::ClosedForm,
    })
}
