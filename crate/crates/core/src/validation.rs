//! Cross-checks between the independent evaluation paths.
//!
//! Each grid point is evaluated by the series engine, the integer-μ closed
//! form where it applies, quadrature, and Monte Carlo. The report records
//! the worst discrepancy of every oracle pair.

use crate::error::Result;
use crate::fading::{KappaMuParams, KAPPA_EPSILON};
use crate::montecarlo::mc_counts;
use crate::secrecy::{
    sop_exact, sop_lower, spsc_closed_form, spsc_quadrature, spsc_series, WiretapPair,
};
use crate::specfun::quad::QuadControl;
use crate::specfun::SeriesControl;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// R = 10^{1/10} nats, the "1 dB" secrecy rate of the figure presets.
pub const ONE_DB_RATE: f64 = 1.258_925_411_794_167_2;

/// Rates at which the bound ordering is checked.
pub const ORDERING_RATES: [f64; 3] = [0.0, 0.5, ONE_DB_RATE];

fn pair(km: f64, mm: f64, ke: f64, me: f64, ratio: f64, rate: f64) -> WiretapPair {
    WiretapPair::new(
        KappaMuParams::new(km, mm, ratio).expect("grid parameters are valid"),
        KappaMuParams::new(ke, me, 1.0).expect("grid parameters are valid"),
        rate,
    )
    .expect("grid parameters are valid")
}

/// 27 integer-μ pairs: κ_M × (μ_M, μ_E) × B, with κ_E = 1 and R = 0.5 nats.
pub fn integer_grid() -> Vec<WiretapPair> {
    let mut out = Vec::new();
    for &km in &[0.5, 2.0, 6.0] {
        for &(mm, me) in &[(1.0, 1.0), (2.0, 3.0), (3.0, 2.0)] {
            for &b in &[0.5, 2.0, 8.0] {
                out.push(pair(km, mm, 1.0, me, b, 0.5));
            }
        }
    }
    out
}

/// Non-integer μ pairs: the figure shapes (μ_M = 1.4, μ_E = 1.2) and the
/// measured D2D, on-body and V2V triples, with small-κ limits mixed in.
pub fn noninteger_grid() -> Vec<WiretapPair> {
    let mut out = Vec::new();
    for &km in &[4.0, 10.0] {
        for &b in &[0.5, 2.0, 5.0] {
            out.push(pair(km, 1.4, 2.0, 1.2, b, ONE_DB_RATE));
        }
    }
    for &(km, mm, ke, me) in &[
        (1.07, 0.91, 1.11, 0.92),
        (2.92, 0.75, 3.60, 0.67),
        (5.02, 0.70, 7.17, 0.60),
        (KAPPA_EPSILON, 1.2, KAPPA_EPSILON, 0.5),
        (5.0, 1.0, KAPPA_EPSILON, 1.2),
    ] {
        for &b in &[1.0, 4.0] {
            out.push(pair(km, mm, ke, me, b, ONE_DB_RATE));
        }
    }
    out
}

pub fn full_grid() -> Vec<WiretapPair> {
    let mut g = integer_grid();
    g.extend(noninteger_grid());
    g
}

pub fn small_grid() -> Vec<WiretapPair> {
    let int = integer_grid();
    let non = noninteger_grid();
    vec![int[0], int[13], int[26], non[1], non[6], non[10], non[14]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub series_vs_closed: f64,
    pub series_vs_quadrature: f64,
    pub complement: f64,
    /// Monte Carlo agreement, in standard errors.
    pub mc_sigma: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            series_vs_closed: 1e-8,
            series_vs_quadrature: 1e-7,
            complement: 1e-8,
            mc_sigma: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// "abs" for probability differences, "sigma" for Monte Carlo z-scores.
    pub unit: String,
    pub max: f64,
    pub tolerance: f64,
    pub worst_point: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub points: usize,
    pub mc_n: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
struct PointResult {
    series_closed: Option<f64>,
    series_quad: f64,
    complement: f64,
    // max over ORDERING_RATES of sop_lower - sop_exact - (both error estimates)
    ordering: f64,
    z_spsc: f64,
    z_sop: f64,
    z_sop_lower: f64,
    inclusion_violations: f64,
}

// Standard error under the analytic value: the plug-in estimate collapses
// to zero when every draw lands on one side of a near-certain event.
fn z(analytic: f64, count: u64, n: usize) -> f64 {
    let p = count as f64 / n as f64;
    let q = analytic.clamp(0.0, 1.0);
    let se = (q * (1.0 - q) / n as f64).sqrt().max(1.0 / n as f64);
    (analytic - p).abs() / se
}

fn evaluate(p: &WiretapPair, mc_n: usize, seed: u64, perturb: f64) -> Result<PointResult> {
    let ctl = SeriesControl::default();
    let qc = QuadControl::default();
    let spsc = spsc_series(p, &ctl)?.value + perturb;
    let integer = p.main.mu.fract() == 0.0 && p.eve.mu.fract() == 0.0;
    let series_closed = if integer {
        Some((spsc - spsc_closed_form(p)?.value).abs())
    } else {
        None
    };
    let series_quad = (spsc - spsc_quadrature(p, &qc)?.value).abs();
    let complement = (sop_lower(&p.with_rate(0.0), &ctl)?.value + spsc - 1.0).abs();
    let mut ordering = f64::NEG_INFINITY;
    for &r in &ORDERING_RATES {
        let q = p.with_rate(r);
        let lo = sop_lower(&q, &ctl)?;
        let ex = sop_exact(&q, &qc)?;
        ordering = ordering.max(lo.value - ex.value - lo.est_error - ex.est_error);
    }
    let c = mc_counts(p, mc_n, seed)?;
    let lower = sop_lower(p, &ctl)?.value;
    let exact = sop_exact(p, &qc)?.value;
    Ok(PointResult {
        series_closed,
        series_quad,
        complement,
        ordering,
        z_spsc: z(spsc, c.spsc, c.n),
        z_sop: z(exact, c.sop, c.n),
        z_sop_lower: z(lower, c.sop_lower, c.n),
        inclusion_violations: c.sop_lower.saturating_sub(c.sop) as f64,
    })
}

fn check<F>(name: &str, unit: &str, tol: f64, results: &[PointResult], get: F) -> Option<Check>
where
    F: Fn(&PointResult) -> Option<f64>,
{
    let mut worst: Option<(usize, f64)> = None;
    for (i, r) in results.iter().enumerate() {
        if let Some(v) = get(r) {
            if worst.is_none_or(|(_, w)| v > w) {
                worst = Some((i, v));
            }
        }
    }
    worst.map(|(i, v)| Check {
        name: name.to_string(),
        unit: unit.to_string(),
        max: v,
        tolerance: tol,
        worst_point: i,
        pass: v <= tol,
    })
}

/// Runs every oracle comparison over `grid`. `perturb` is added to the
/// series SPSC before comparison; a nonzero value is a negative control.
pub fn run_validation(
    grid: &[WiretapPair],
    mc_n: usize,
    seed: u64,
    tol: &Tolerances,
    perturb: f64,
) -> Result<ValidationReport> {
    let results: Vec<PointResult> = grid
        .par_iter()
        .map(|p| evaluate(p, mc_n, seed, perturb))
        .collect::<Result<_>>()?;
    let checks: Vec<Check> = [
        check("series_vs_closed_form", "abs", tol.series_vs_closed, &results, |r| r.series_closed),
        check("series_vs_quadrature", "abs", tol.series_vs_quadrature, &results, |r| Some(r.series_quad)),
        check("complement_at_zero_rate", "abs", tol.complement, &results, |r| Some(r.complement)),
        check("bound_ordering_excess", "abs", 0.0, &results, |r| Some(r.ordering)),
        check("mc_spsc", "sigma", tol.mc_sigma, &results, |r| Some(r.z_spsc)),
        check("mc_sop_exact", "sigma", tol.mc_sigma, &results, |r| Some(r.z_sop)),
        check("mc_sop_lower", "sigma", tol.mc_sigma, &results, |r| Some(r.z_sop_lower)),
        check("mc_event_inclusion", "count", 0.0, &results, |r| Some(r.inclusion_violations)),
    ]
    .into_iter()
    .flatten()
    .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(ValidationReport {
        points: grid.len(),
        mc_n,
        seed,
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        assert_eq!(integer_grid().len(), 27);
        assert!(integer_grid()
            .iter()
            .all(|p| p.main.mu.fract() == 0.0 && p.eve.mu.fract() == 0.0));
        assert!(noninteger_grid().iter().any(|p| p.main.mu == 1.4 && p.eve.mu == 1.2));
        assert_eq!(full_grid().len(), 27 + noninteger_grid().len());
        assert!((ONE_DB_RATE - 10f64.powf(0.1)).abs() < 1e-15);
    }

    #[test]
    fn small_grid_passes_and_break_fails() {
        let g = small_grid();
        let ok = run_validation(&g, 20_000, 3, &Tolerances::default(), 0.0).unwrap();
        assert!(ok.pass, "{ok:#?}");
        let bad = run_validation(&g, 20_000, 3, &Tolerances::default(), 1e-3).unwrap();
        assert!(!bad.pass);
        assert!(bad.checks.iter().any(|c| c.name == "series_vs_closed_form" && !c.pass));
    }
}
