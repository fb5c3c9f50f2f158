//! Secrecy metrics for a κ-μ wiretap pair.
//!
//! Rates are in nats throughout. The main (legitimate) and eavesdropper
//! channels are independent.
//!
//! * [`spsc_series`]: Pr[γ_M > γ_E] for arbitrary real κ, μ.
//! * [`spsc_closed_form`]: the same probability for integer μ, finite sums only.
//! * [`sop_lower`]: Pr[γ_M <= e^R γ_E], the high-SNR lower bound on outage.
//! * [`sop_exact`]: Pr[γ_M <= e^R (1 + γ_E) - 1] by quadrature.

mod closed_form;
mod integral;
mod series;

pub use closed_form::{closed_form_m_sum, spsc_closed_form, ClosedFormParams, CLOSED_FORM_KAPPA_MIN};
pub use integral::{sop_exact, spsc_quadrature};
pub use series::{sop_lower, spsc_series};

use crate::error::{Error, Result};
use crate::fading::KappaMuParams;
use crate::specfun::{bessel_i_scaled, marcum_q, SeriesControl};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WiretapPair {
    pub main: KappaMuParams,
    pub eve: KappaMuParams,
    /// Target secrecy rate in nats.
    pub rate: f64,
}

impl WiretapPair {
    pub fn new(main: KappaMuParams, eve: KappaMuParams, rate: f64) -> Result<Self> {
        let pair = WiretapPair { main, eve, rate };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        self.main.validate()?;
        self.eve.validate()?;
        if !(self.rate >= 0.0) || !self.rate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "secrecy rate {} must be finite and >= 0 nats",
                self.rate
            )));
        }
        Ok(())
    }

    pub fn with_rate(self, rate: f64) -> Self {
        WiretapPair { rate, ..self }
    }

    pub fn with_main_gamma_bar(self, gamma_bar: f64) -> Self {
        WiretapPair {
            main: self.main.with_gamma_bar(gamma_bar),
            ..self
        }
    }

    /// B = γ̄_M / γ̄_E.
    pub fn snr_ratio(&self) -> f64 {
        self.main.gamma_bar / self.eve.gamma_bar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A probability together with how it was obtained.
///
/// `terms_k`/`terms_l` are the outer/inner series lengths for
/// [`Method::Series`], the number of m-terms and Marcum terms for
/// [`Method::ClosedForm`], and the number of quadrature intervals (in
/// `terms_k`) for [`Method::Quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub terms_k: usize,
    pub terms_l: usize,
    pub est_error: f64,
    pub method: Method,
}

/// Instantaneous secrecy capacity ln(1 + γ_M) - ln(1 + γ_E), floored at 0.
pub fn secrecy_capacity(gamma_m: f64, gamma_e: f64) -> f64 {
    if gamma_m > gamma_e {
        gamma_m.ln_1p() - gamma_e.ln_1p()
    } else {
        0.0
    }
}

/// Rayleigh/Rayleigh SPSC, γ̄_M / (γ̄_M + γ̄_E).
pub fn spsc_rayleigh_reference(gbar_m: f64, gbar_e: f64) -> Result<f64> {
    if !(gbar_m > 0.0) || !(gbar_e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "average SNRs must be positive (got {gbar_m}, {gbar_e})"
        )));
    }
    Ok(gbar_m / (gbar_m + gbar_e))
}

/// Rice/Rice SPSC in its textbook closed form (one Marcum Q_1 and one
/// exponentially weighted I_0 term). Test oracle for the general engines.
pub fn spsc_rice_reference(k_m: f64, k_e: f64, gbar_m: f64, gbar_e: f64) -> Result<f64> {
    if !(k_m > 0.0) || !(k_e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Rice factors must be positive (got {k_m}, {k_e})"
        )));
    }
    spsc_rayleigh_reference(gbar_m, gbar_e)?;
    let a = 1.0 / gbar_m;
    let b = 1.0 / gbar_e;
    let denom = b * (1.0 + k_e) + a * (1.0 + k_m);
    let q_a = (2.0 * k_e * a * (1.0 + k_m) / denom).sqrt();
    let q_b = (2.0 * k_m * b * (1.0 + k_e) / denom).sqrt();
    let q = marcum_q(1.0, q_a, q_b, &SeriesControl::new(1e-15, 1e-15, 100_000)?)?.value;
    let x = 2.0 * (a * b * k_m * k_e * (1.0 + k_e) * (1.0 + k_m)).sqrt() / denom;
    let expo = -(a * k_e * (1.0 + k_m) + b * k_m * (1.0 + k_e)) / denom;
    let weight = b * (1.0 + k_e) / denom;
    Ok(1.0 - q + weight * (expo + x).exp() * bessel_i_scaled(0.0, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_branches() {
        assert_eq!(secrecy_capacity(3.0, 3.0), 0.0);
        assert!((secrecy_capacity(std::f64::consts::E - 1.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(secrecy_capacity(1.0, 2.0), 0.0);
    }

    #[test]
    fn rayleigh_reference_values() {
        assert_eq!(spsc_rayleigh_reference(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(spsc_rayleigh_reference(3.0, 1.0).unwrap(), 0.75);
        assert!((spsc_rayleigh_reference(1.0, 4.0).unwrap() - 0.2).abs() < 1e-15);
        assert!(spsc_rayleigh_reference(0.0, 1.0).is_err());
    }

    #[test]
    fn rice_reference_limits() {
        for &k in &[0.3, 4.0, 15.0] {
            let v = spsc_rice_reference(k, k, 2.0, 2.0).unwrap();
            assert!((v - 0.5).abs() < 1e-12, "K={k}: {v}");
        }
        let v = spsc_rice_reference(1e-9, 1e-9, 3.0, 1.0).unwrap();
        assert!((v - 0.75).abs() < 1e-8);
        // quadrature of ∫ f_E (1 - F_M) with Rice laws, mpmath
        let v = spsc_rice_reference(15.0, 12.0, 2.0, 1.0).unwrap();
        assert!((v - 0.904379609798788773874).abs() < 1e-11);
    }

    #[test]
    fn pair_validation() {
        let p = KappaMuParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(WiretapPair::new(p, p, -0.1).is_err());
        assert!(WiretapPair::new(p, p, f64::INFINITY).is_err());
        let w = WiretapPair::new(p, p, 0.0).unwrap().with_main_gamma_bar(4.0);
        assert_eq!(w.snr_ratio(), 4.0);
    }

    #[test]
    fn method_tags() {
        assert_eq!(serde_json::to_string(&Method::ClosedForm).unwrap(), "\"closed_form\"");
        assert_eq!(Method::MonteCarlo.to_string(), "monte_carlo");
    }
}
