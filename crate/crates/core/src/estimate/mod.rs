//! Fitting κ-μ parameters to measured envelope traces.
//!
//! The workflow strips slow shadowing by dividing the trace by its local
//! mean, then minimizes the squared error between a histogram density and
//! the model envelope density over (κ, μ), with r̂ fixed to the sample RMS.

mod histogram;
pub mod io;
mod simplex;

pub use histogram::{freedman_diaconis_width, histogram, quantile_sorted, Histogram, MAX_BINS};
pub use simplex::{nelder_mead, SimplexOptions, SimplexOutcome};

use crate::error::{Error, Result};
use crate::fading::{envelope_pdf, KappaMuParams, SnrSampler};
use crate::rng::stream_rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const KAPPA_BOUNDS: (f64, f64) = (1e-6, 50.0);
pub const MU_BOUNDS: (f64, f64) = (0.05, 10.0);
pub const MIN_FIT_SAMPLES: usize = 1000;

/// Multi-start grid, row-major over κ then μ.
pub const DEFAULT_STARTS: [(f64, f64); 9] = [
    (0.1, 0.5),
    (0.1, 1.0),
    (0.1, 2.0),
    (1.0, 0.5),
    (1.0, 1.0),
    (1.0, 2.0),
    (5.0, 0.5),
    (5.0, 1.0),
    (5.0, 2.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeTrace {
    pub samples: Vec<f64>,
    pub sample_rate_hz: Option<f64>,
}

impl EnvelopeTrace {
    pub fn new(samples: Vec<f64>, sample_rate_hz: Option<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("trace is empty".into()));
        }
        if let Some(i) = samples.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample {i} = {} is not a finite nonnegative envelope value",
                samples[i]
            )));
        }
        Ok(EnvelopeTrace {
            samples,
            sample_rate_hz,
        })
    }

    /// Converts received-power samples to envelope samples by square root.
    pub fn from_power(power: Vec<f64>, sample_rate_hz: Option<f64>) -> Result<Self> {
        let t = EnvelopeTrace::new(power, sample_rate_hz)?;
        Ok(EnvelopeTrace {
            samples: t.samples.into_iter().map(f64::sqrt).collect(),
            ..t
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn rms(&self) -> f64 {
        (self.samples.iter().map(|x| x * x).sum::<f64>() / self.len() as f64).sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        EnvelopeTrace {
            samples: self.samples.iter().map(|x| x * c).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }
}

/// Envelope draws R = r̂ sqrt(γ) with γ a unit-mean κ-μ SNR.
pub fn synthetic_envelope(kappa: f64, mu: f64, r_hat: f64, n: usize, seed: u64) -> Result<EnvelopeTrace> {
    if !(r_hat > 0.0) {
        return Err(Error::InvalidParameter(format!("r_hat = {r_hat} must be > 0")));
    }
    let sampler = SnrSampler::new(&KappaMuParams::new(kappa, mu, 1.0)?)?;
    let mut rng = stream_rng(seed, 0);
    EnvelopeTrace::new((0..n).map(|_| r_hat * sampler.draw(&mut rng).sqrt()).collect(), None)
}

/// Divides each sample by the centered moving average over `window`
/// samples (odd). Near the ends the window shrinks to the samples available.
/// A zero local mean leaves a zero sample.
pub fn local_mean_normalize(trace: &EnvelopeTrace, window: usize) -> Result<EnvelopeTrace> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "smoothing window {window} must be a positive odd sample count"
        )));
    }
    let n = trace.len();
    if n < window {
        return Err(Error::InvalidParameter(format!(
            "trace of {n} samples is shorter than the {window}-sample window"
        )));
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &x in &trace.samples {
        acc += x;
        prefix.push(acc);
    }
    let half = window / 2;
    let samples = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let mean = if hi - lo == 1 {
                trace.samples[i]
            } else {
                (prefix[hi] - prefix[lo]) / (hi - lo) as f64
            };
            if mean > 0.0 {
                trace.samples[i] / mean
            } else {
                0.0
            }
        })
        .collect();
    Ok(EnvelopeTrace {
        samples,
        sample_rate_hz: trace.sample_rate_hz,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitOptions {
    /// Histogram bin width; Freedman–Diaconis when `None`.
    pub bin_width: Option<f64>,
    pub max_iter: usize,
    pub starts: Vec<(f64, f64)>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            bin_width: None,
            max_iter: 500,
            starts: DEFAULT_STARTS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kappa_hat: f64,
    pub mu_hat: f64,
    pub r_hat: f64,
    /// Σ over bins of (empirical density - model density)².
    pub residual: f64,
    pub iterations: usize,
    /// Index into the start list that produced the winner.
    pub start_index: usize,
    pub bins: usize,
    /// Best residual after each simplex iteration of the winning start.
    pub residual_history: Vec<f64>,
}

/// Sum of squared density errors at the histogram bin centers.
pub fn fit_objective(hist: &Histogram, r_hat: f64, kappa: f64, mu: f64) -> f64 {
    let mut sse = 0.0;
    for (c, &d) in hist.centers().zip(&hist.density) {
        match envelope_pdf(kappa, mu, r_hat, c) {
            Ok(m) if m.is_finite() => sse += (d - m).powi(2),
            _ => return f64::INFINITY,
        }
    }
    sse
}

fn to_params(x: [f64; 2]) -> (f64, f64) {
    (x[0].exp(), x[1].exp())
}

fn project(x: [f64; 2]) -> [f64; 2] {
    [
        x[0].clamp(KAPPA_BOUNDS.0.ln(), KAPPA_BOUNDS.1.ln()),
        x[1].clamp(MU_BOUNDS.0.ln(), MU_BOUNDS.1.ln()),
    ]
}

/// Least-squares κ-μ fit of the envelope density, searched in (ln κ, ln μ)
/// from every start in `opts.starts`. Lowest residual wins; ties go to the
/// earlier start.
pub fn fit_kappa_mu(trace: &EnvelopeTrace, opts: &FitOptions) -> Result<FitResult> {
    if trace.len() < MIN_FIT_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "fitting needs at least {MIN_FIT_SAMPLES} samples (got {})",
            trace.len()
        )));
    }
    if opts.starts.is_empty() {
        return Err(Error::InvalidParameter("no optimizer starts given".into()));
    }
    let hist = histogram(&trace.samples, opts.bin_width)?;
    let r_hat = trace.rms();
    let simplex = SimplexOptions {
        max_iter: opts.max_iter,
        ..SimplexOptions::default()
    };
    let outcomes: Vec<SimplexOutcome> = opts
        .starts
        .par_iter()
        .map(|&(k, m)| {
            let x0 = project([k.ln(), m.ln()]);
            nelder_mead(
                |x| {
                    let (k, m) = to_params(x);
                    fit_objective(&hist, r_hat, k, m)
                },
                project,
                x0,
                &simplex,
            )
        })
        .collect();
    let mut best: Option<(usize, &SimplexOutcome)> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if !o.converged || !o.f.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, b)| o.f < b.f) {
            best = Some((i, o));
        }
    }
    let (start_index, o) = best.ok_or_else(|| {
        Error::Optimizer(format!(
            "no start converged within {} iterations",
            opts.max_iter
        ))
    })?;
    let (kappa_hat, mu_hat) = to_params(o.x);
    Ok(FitResult {
        kappa_hat,
        mu_hat,
        r_hat,
        residual: o.f,
        iterations: o.iterations,
        start_index,
        bins: hist.density.len(),
        residual_history: o.history.clone(),
    })
}

/// (envelope, empirical density, fitted density) at every bin center.
pub fn pdf_grid(trace: &EnvelopeTrace, fit: &FitResult, bin_width: Option<f64>) -> Result<Vec<(f64, f64, f64)>> {
    let hist = histogram(&trace.samples, bin_width)?;
    hist.centers()
        .zip(&hist.density)
        .map(|(c, &d)| Ok((c, d, envelope_pdf(fit.kappa_hat, fit.mu_hat, fit.r_hat, c)?)))
        .collect()
}
