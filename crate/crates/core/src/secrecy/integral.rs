//! Metrics as one-dimensional integrals over the eavesdropper SNR.
//!
//! The substitution γ_E = γ̄_E u^p, u = t / (1 - t), t ∈ (0, 1), with
//! p = 1 / min(μ_E, 1) removes the γ^{μ_E - 1} endpoint singularity; the
//! density factor is assembled in log space.

use super::{EvalResult, Method, WiretapPair};
use crate::error::{Error, Result};
use crate::fading::{ln_snr_pdf, snr_cdf, snr_sf, KappaMuParams};
use crate::specfun::quad::{integrate, QuadControl};
use crate::specfun::SeriesControl;
use std::cell::RefCell;

fn integrate_over_eve<G>(eve: &KappaMuParams, g: G, qc: &QuadControl) -> Result<EvalResult>
where
    G: Fn(f64) -> Result<f64>,
{
    let p = 1.0 / eve.mu.min(1.0);
    let ln_scale = eve.gamma_bar.ln() + p.ln();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |t: f64| -> f64 {
        let ln_u = t.ln() - (-t).ln_1p();
        let ln_gamma = eve.gamma_bar.ln() + p * ln_u;
        let res = ln_snr_pdf(eve, ln_gamma).and_then(|ln_f| {
            let ln_jac = ln_scale + (p - 1.0) * ln_u - 2.0 * (-t).ln_1p();
            let ln_w = ln_f + ln_jac;
            if ln_w < -745.0 {
                return Ok(0.0);
            }
            let gv = g(ln_gamma.exp())?;
            Ok(if gv == 0.0 { 0.0 } else { gv * ln_w.exp() })
        });
        match res {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let out = integrate(integrand, 0.0, 1.0, qc);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let q = out?;
    Ok(EvalResult {
        value: q.value.clamp(0.0, 1.0),
        terms_k: q.intervals,
        terms_l: 0,
        est_error: q.est_error,
        method: Method::Quadrature,
    })
}

fn inner_ctl() -> SeriesControl {
    SeriesControl::new(1e-14, 1e-13, 100_000).expect("valid control")
}

/// Exact secrecy outage Pr[γ_M <= e^R (1 + γ_E) - 1]
/// = ∫ f_E(γ) F_M(e^R (1 + γ) - 1) dγ.
pub fn sop_exact(pair: &WiretapPair, qc: &QuadControl) -> Result<EvalResult> {
    pair.validate()?;
    let ctl = inner_ctl();
    let growth = pair.rate.exp();
    let offset = pair.rate.exp_m1();
    integrate_over_eve(
        &pair.eve,
        |g| snr_cdf(&pair.main, offset + growth * g, &ctl),
        qc,
    )
}

/// SPSC as ∫ f_E(γ) (1 - F_M(γ)) dγ; an independent check on the series.
pub fn spsc_quadrature(pair: &WiretapPair, qc: &QuadControl) -> Result<EvalResult> {
    pair.validate()?;
    let ctl = inner_ctl();
    integrate_over_eve(&pair.eve, |g| snr_sf(&pair.main, g, &ctl), qc)
}
