//! The κ-μ small-scale fading model for one link.
//!
//! The instantaneous SNR γ of a κ-μ channel with average SNR γ̄ has density
//!
//! ```text
//! f(γ) = β (βγ/α)^{(μ-1)/2} exp(-βγ - α) I_{μ-1}(2 sqrt(αβγ)),
//! α = κμ,  β = μ(1+κ)/γ̄
//! ```
//!
//! and CDF `1 - Q_μ(sqrt(2α), sqrt(2βγ))`. Equivalently `2βγ` is a
//! noncentral chi-square with `2μ` degrees of freedom and noncentrality
//! `2α`, i.e. a Poisson(α) mixture of Gamma(μ + P) variables; the sampler
//! uses that representation.

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::specfun::{gamma_p, gamma_q, ln_bessel_i, log_gamma, marcum_p, marcum_q, SeriesControl};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

/// Stand-in for the κ → 0 limit in the analytical series.
pub const KAPPA_EPSILON: f64 = 1e-9;

/// One channel's fading triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaMuParams {
    pub kappa: f64,
    pub mu: f64,
    /// Average SNR, linear scale.
    pub gamma_bar: f64,
}

impl KappaMuParams {
    pub fn new(kappa: f64, mu: f64, gamma_bar: f64) -> Result<Self> {
        let p = KappaMuParams {
            kappa,
            mu,
            gamma_bar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa = {} must be >= 0", self.kappa)));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {} must be > 0", self.mu)));
        }
        if !(self.gamma_bar > 0.0) || !self.gamma_bar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma_bar = {} must be > 0",
                self.gamma_bar
            )));
        }
        Ok(())
    }

    pub fn with_gamma_bar(self, gamma_bar: f64) -> Self {
        KappaMuParams { gamma_bar, ..self }
    }

    /// κ with exact zero replaced by [`KAPPA_EPSILON`].
    pub fn series_kappa(&self) -> f64 {
        if self.kappa == 0.0 {
            KAPPA_EPSILON
        } else {
            self.kappa
        }
    }

    /// α = κμ, the Poisson rate of the mixture representation.
    pub fn alpha(&self) -> f64 {
        self.kappa * self.mu
    }

    /// β = μ(1+κ)/γ̄, the rate of each Gamma component.
    pub fn beta(&self) -> f64 {
        self.mu * (1.0 + self.kappa) / self.gamma_bar
    }

    /// First Marcum argument sqrt(2κμ).
    pub fn marcum_alpha(&self) -> f64 {
        (2.0 * self.alpha()).sqrt()
    }

    /// Variance of γ: γ̄² (1 + 2κ) / (μ (1 + κ)²).
    pub fn snr_variance(&self) -> f64 {
        self.gamma_bar * self.gamma_bar * (1.0 + 2.0 * self.kappa)
            / (self.mu * (1.0 + self.kappa).powi(2))
    }
}

/// μ implied by the first two SNR moments for a given κ.
pub fn mu_from_moments(mean: f64, variance: f64, kappa: f64) -> f64 {
    mean * mean * (1.0 + 2.0 * kappa) / (variance * (1.0 + kappa).powi(2))
}

/// SNR density f_γ(γ).
///
/// Defined for γ > 0. At γ = 0 it returns the finite limit when μ >= 1 and
/// a domain error when μ < 1, where the density diverges.
pub fn snr_pdf(p: &KappaMuParams, gamma: f64) -> Result<f64> {
    p.validate()?;
    if !(gamma >= 0.0) {
        return Err(Error::domain("snr_pdf", format!("gamma = {gamma} must be >= 0")));
    }
    if gamma.is_infinite() {
        return Ok(0.0);
    }
    let beta = p.beta();
    if gamma == 0.0 {
        return if p.mu > 1.0 {
            Ok(0.0)
        } else if p.mu == 1.0 {
            Ok(beta * (-p.alpha()).exp())
        } else {
            Err(Error::domain("snr_pdf", format!("density diverges at gamma = 0 for mu = {}", p.mu)))
        };
    }
    Ok(ln_snr_pdf(p, gamma.ln())?.exp())
}

/// ln f_γ(γ) taken as a function of ln γ, so quadrature substitutions that
/// push γ below the smallest double stay finite. Callers validate `p`.
pub(crate) fn ln_snr_pdf(p: &KappaMuParams, ln_gamma: f64) -> Result<f64> {
    let beta = p.beta();
    let ln_beta = beta.ln();
    let bg = beta * ln_gamma.exp();
    if p.kappa == 0.0 {
        return Ok(p.mu * ln_beta + (p.mu - 1.0) * ln_gamma - bg - log_gamma(p.mu)?);
    }
    let alpha = p.alpha();
    let ln_alpha = alpha.ln();
    let v = p.mu - 1.0;
    let ln_arg = LN_2 + 0.5 * (ln_alpha + ln_beta + ln_gamma);
    // leading power-series term once the Bessel argument is negligible
    let ln_i = if ln_arg < -300.0 {
        v * (ln_arg - LN_2) - log_gamma(p.mu)?
    } else {
        ln_bessel_i(v, ln_arg.exp())?
    };
    Ok(ln_beta + 0.5 * v * (ln_beta + ln_gamma - ln_alpha) - bg - alpha + ln_i)
}

/// SNR CDF F_γ(γ) = 1 - Q_μ(sqrt(2κμ), sqrt(2(1+κ)μγ/γ̄)).
pub fn snr_cdf(p: &KappaMuParams, gamma: f64, ctl: &SeriesControl) -> Result<f64> {
    p.validate()?;
    if !(gamma >= 0.0) {
        return Err(Error::domain("snr_cdf", format!("gamma = {gamma} must be >= 0")));
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    let x = p.beta() * gamma;
    if p.kappa == 0.0 {
        return gamma_p(p.mu, x);
    }
    let b = (2.0 * x).sqrt();
    // sum whichever tail is the smaller probability
    if x < p.mu + p.alpha() {
        Ok(marcum_p(p.mu, p.marcum_alpha(), b, ctl)?.value)
    } else {
        Ok(1.0 - marcum_q(p.mu, p.marcum_alpha(), b, ctl)?.value)
    }
}

/// SNR survival function 1 - F_γ(γ), summed directly rather than by
/// subtraction so deep-tail values keep their relative accuracy.
pub fn snr_sf(p: &KappaMuParams, gamma: f64, ctl: &SeriesControl) -> Result<f64> {
    p.validate()?;
    if !(gamma >= 0.0) {
        return Err(Error::domain("snr_sf", format!("gamma = {gamma} must be >= 0")));
    }
    if gamma.is_infinite() {
        return Ok(0.0);
    }
    let x = p.beta() * gamma;
    if p.kappa == 0.0 {
        return gamma_q(p.mu, x);
    }
    Ok(marcum_q(p.mu, p.marcum_alpha(), (2.0 * x).sqrt(), ctl)?.value)
}

/// Envelope density of R with E[R²] = r_hat², obtained from the SNR density
/// by γ/γ̄ = (r / r_hat)².
pub fn envelope_pdf(kappa: f64, mu: f64, r_hat: f64, r: f64) -> Result<f64> {
    let unit = KappaMuParams::new(kappa, mu, 1.0)?;
    if !(r_hat > 0.0) {
        return Err(Error::InvalidParameter(format!("r_hat = {r_hat} must be > 0")));
    }
    if !(r >= 0.0) {
        return Err(Error::domain("envelope_pdf", format!("r = {r} must be >= 0")));
    }
    if r == 0.0 {
        return if mu > 0.5 {
            Ok(0.0)
        } else {
            Err(Error::domain("envelope_pdf", format!("density is unbounded at r = 0 for mu = {mu}")))
        };
    }
    let rho = r / r_hat;
    Ok(snr_pdf(&unit, rho * rho)? * 2.0 * rho / r_hat)
}

/// Draws SNR samples through the Poisson–Gamma mixture, which covers
/// non-integer μ.
#[derive(Debug, Clone)]
pub struct SnrSampler {
    poisson: Option<Poisson<f64>>,
    mu: f64,
    scale: f64,
}

impl SnrSampler {
    pub fn new(p: &KappaMuParams) -> Result<Self> {
        p.validate()?;
        let rate = p.alpha();
        let poisson = if rate > 0.0 {
            Some(Poisson::new(rate).map_err(|e| Error::InvalidParameter(format!("poisson rate {rate}: {e}")))?)
        } else {
            None
        };
        Ok(SnrSampler {
            poisson,
            mu: p.mu,
            scale: p.gamma_bar / (2.0 * p.mu * (1.0 + p.kappa)),
        })
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let extra = match &self.poisson {
            Some(d) => d.sample(rng),
            None => 0.0,
        };
        // shape > 0 and scale = 2 always form a valid Gamma
        let chi = Gamma::new(self.mu + extra, 2.0)
            .expect("positive gamma shape")
            .sample(rng);
        chi * self.scale
    }
}

/// `n` i.i.d. SNR draws, deterministic for a given seed.
pub fn sample_snr(p: &KappaMuParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    let sampler = SnrSampler::new(p)?;
    let mut rng = stream_rng(seed, 0);
    Ok((0..n).map(|_| sampler.draw(&mut rng)).collect())
}

/// In-phase/quadrature cluster construction for integer μ:
/// R² = Σ (X_i + p_i)² + (Y_i + q_i)², X_i, Y_i ~ N(0, σ²).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub mu_int: usize,
    pub sigma: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl ClusterSpec {
    /// Builds clusters in SNR units (E[R²] = γ̄), splitting the dominant power
    /// evenly over every in-phase and quadrature mean.
    pub fn from_params(params: &KappaMuParams) -> Result<Self> {
        params.validate()?;
        let mu = params.mu;
        if mu != mu.round() || mu < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "cluster construction needs a positive integer mu (got {mu})"
            )));
        }
        let mu_int = mu as usize;
        let sigma2 = params.gamma_bar / (2.0 * mu * (1.0 + params.kappa));
        let d2 = 2.0 * params.kappa * mu * sigma2;
        let mean = (d2 / (2.0 * mu)).sqrt();
        Ok(ClusterSpec {
            mu_int,
            sigma: sigma2.sqrt(),
            p: vec![mean; mu_int],
            q: vec![mean; mu_int],
        })
    }

    pub fn d_squared(&self) -> f64 {
        self.p.iter().chain(self.q.iter()).map(|v| v * v).sum()
    }

    pub fn kappa(&self) -> f64 {
        self.d_squared() / (2.0 * self.mu_int as f64 * self.sigma * self.sigma)
    }

    pub fn mean_power(&self) -> f64 {
        2.0 * self.mu_int as f64 * self.sigma * self.sigma + self.d_squared()
    }

    pub fn sample_snr(&self, n: usize, seed: u64) -> Vec<f64> {
        let normal = Normal::new(0.0, self.sigma).expect("finite sigma");
        let mut rng = stream_rng(seed, 0);
        (0..n)
            .map(|_| {
                self.p
                    .iter()
                    .zip(&self.q)
                    .map(|(pi, qi)| {
                        let x = normal.sample(&mut rng) + pi;
                        let y = normal.sample(&mut rng) + qi;
                        x * x + y * y
                    })
                    .sum()
            })
            .collect()
    }
}

/// Shorthand coefficients shared by the analytical secrecy expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropCoefficients {
    pub a: f64,
    pub b: f64,
    pub alpha_m: f64,
    pub alpha_e: f64,
    pub beta_m: f64,
    pub beta_e: f64,
}

impl PropCoefficients {
    pub fn new(main: &KappaMuParams, eve: &KappaMuParams) -> Self {
        let a = 1.0 / main.gamma_bar;
        let b = 1.0 / eve.gamma_bar;
        PropCoefficients {
            a,
            b,
            alpha_m: main.kappa * main.mu,
            alpha_e: eve.kappa * eve.mu,
            beta_m: (main.kappa + 1.0) * a * main.mu,
            beta_e: (eve.kappa + 1.0) * b * eve.mu,
        }
    }
}

/// Named special cases of the κ-μ family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Scenario {
    Rayleigh,
    Rice { k: f64 },
    NakagamiM { m: f64 },
    OneSidedGaussian,
    KappaMu { kappa: f64, mu: f64 },
}

pub const SCENARIO_TAGS: [&str; 5] = [
    "rayleigh",
    "rice",
    "nakagami_m",
    "one_sided_gaussian",
    "kappa_mu",
];

impl Scenario {
    pub fn tag(&self) -> &'static str {
        match self {
            Scenario::Rayleigh => "rayleigh",
            Scenario::Rice { .. } => "rice",
            Scenario::NakagamiM { .. } => "nakagami_m",
            Scenario::OneSidedGaussian => "one_sided_gaussian",
            Scenario::KappaMu { .. } => "kappa_mu",
        }
    }

    /// Builds a scenario from its tag. `shape` is K for `rice`, m for
    /// `nakagami_m`, and (κ, μ) for `kappa_mu`.
    pub fn from_tag(tag: &str, kappa: Option<f64>, mu: Option<f64>) -> Result<Self> {
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("scenario '{tag}' needs {what}")))
        };
        match tag.parse::<ScenarioTag>()? {
            ScenarioTag::Rayleigh => Ok(Scenario::Rayleigh),
            ScenarioTag::OneSidedGaussian => Ok(Scenario::OneSidedGaussian),
            ScenarioTag::Rice => Ok(Scenario::Rice {
                k: need(kappa, "K (kappa)")?,
            }),
            ScenarioTag::NakagamiM => Ok(Scenario::NakagamiM {
                m: need(mu, "m (mu)")?,
            }),
            ScenarioTag::KappaMu => Ok(Scenario::KappaMu {
                kappa: need(kappa, "kappa")?,
                mu: need(mu, "mu")?,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScenarioTag {
    Rayleigh,
    Rice,
    NakagamiM,
    OneSidedGaussian,
    KappaMu,
}

impl FromStr for ScenarioTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rayleigh" => Ok(ScenarioTag::Rayleigh),
            "rice" => Ok(ScenarioTag::Rice),
            "nakagami_m" => Ok(ScenarioTag::NakagamiM),
            "one_sided_gaussian" => Ok(ScenarioTag::OneSidedGaussian),
            "kappa_mu" => Ok(ScenarioTag::KappaMu),
            other => Err(Error::InvalidParameter(format!(
                "unknown scenario '{other}' (expected one of {})",
                SCENARIO_TAGS.join(", ")
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Rice { k } => write!(f, "rice(K={k})"),
            Scenario::NakagamiM { m } => write!(f, "nakagami_m(m={m})"),
            Scenario::KappaMu { kappa, mu } => write!(f, "kappa_mu(kappa={kappa}, mu={mu})"),
            other => f.write_str(other.tag()),
        }
    }
}

/// Parameter substitution for a special case; κ → 0 limits use
/// [`KAPPA_EPSILON`].
pub fn make_special_case(scenario: &Scenario, gamma_bar: f64) -> Result<KappaMuParams> {
    let positive = |v: f64, what: &str| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidParameter(format!("{what} = {v} must be positive")))
        }
    };
    let (kappa, mu) = match *scenario {
        Scenario::Rayleigh => (KAPPA_EPSILON, 1.0),
        Scenario::Rice { k } => (positive(k, "Rice K")?, 1.0),
        Scenario::NakagamiM { m } => (KAPPA_EPSILON, positive(m, "Nakagami m")?),
        Scenario::OneSidedGaussian => (KAPPA_EPSILON, 0.5),
        Scenario::KappaMu { kappa, mu } => {
            if !(kappa >= 0.0) {
                return Err(Error::InvalidParameter(format!("kappa = {kappa} must be >= 0")));
            }
            (kappa, positive(mu, "mu")?)
        }
    };
    KappaMuParams::new(kappa, mu, gamma_bar)
}
