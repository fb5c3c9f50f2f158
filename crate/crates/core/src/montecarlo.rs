//! Empirical secrecy metrics from simulated (γ_M, γ_E) pairs.
//!
//! Draws are produced in fixed chunks of [`CHUNK`] pairs; chunk `c` reads
//! stream `c` of the seeded generator (see [`crate::rng`]), main before eve
//! within each pair. Chunks run in parallel and their counts are summed, so
//! results are bit-identical for any thread count.

use crate::error::{Error, Result};
use crate::fading::SnrSampler;
use crate::rng::stream_rng;
use crate::secrecy::WiretapPair;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const CHUNK: usize = 1 << 16;
pub const MIN_DRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

impl McEstimate {
    fn from_count(count: u64, n: usize, seed: u64) -> Self {
        let p = count as f64 / n as f64;
        McEstimate {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n,
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors. A zero standard
    /// error (all-or-nothing sample) falls back to one-draw resolution.
    pub fn brackets(&self, value: f64, k: f64) -> bool {
        let se = self.std_error.max(1.0 / self.n as f64);
        (value - self.estimate).abs() <= k * se
    }
}

/// Event counts over one shared stream of draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct McCounts {
    pub n: usize,
    /// γ_M > γ_E
    pub spsc: u64,
    /// γ_M <= e^R (1 + γ_E) - 1
    pub sop: u64,
    /// γ_M <= e^R γ_E
    pub sop_lower: u64,
}

impl McCounts {
    pub fn spsc(&self, seed: u64) -> McEstimate {
        McEstimate::from_count(self.spsc, self.n, seed)
    }
    pub fn sop(&self, seed: u64) -> McEstimate {
        McEstimate::from_count(self.sop, self.n, seed)
    }
    pub fn sop_lower(&self, seed: u64) -> McEstimate {
        McEstimate::from_count(self.sop_lower, self.n, seed)
    }
}

/// Outage thresholds on γ_M for a given γ_E, as (exact, lower).
#[derive(Debug, Clone, Copy)]
struct Thresholds {
    growth: f64,
    offset: f64,
}

impl Thresholds {
    fn new(rate: f64) -> Self {
        Thresholds {
            growth: rate.exp(),
            offset: rate.exp_m1(),
        }
    }

    #[inline]
    fn at(&self, gamma_e: f64) -> (f64, f64) {
        let lower = self.growth * gamma_e;
        (self.offset + lower, lower)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_DRAWS {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least {MIN_DRAWS} draws (got {n})"
        )));
    }
    Ok(())
}

fn for_each_chunk<T, F>(pair: &WiretapPair, n: usize, seed: u64, per_chunk: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut dyn FnMut() -> (f64, f64), usize) -> T + Sync,
{
    pair.validate()?;
    let main = SnrSampler::new(&pair.main)?;
    let eve = SnrSampler::new(&pair.eve)?;
    let chunks = n.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(n - c * CHUNK);
            let mut rng = stream_rng(seed, c as u64);
            let mut next = || {
                let gm = main.draw(&mut rng);
                let ge = eve.draw(&mut rng);
                (gm, ge)
            };
            per_chunk(&mut next, len)
        })
        .collect())
}

/// All three event counts from one stream of `n` pairs.
pub fn mc_counts(pair: &WiretapPair, n: usize, seed: u64) -> Result<McCounts> {
    check_n(n)?;
    let th = Thresholds::new(pair.rate);
    let parts = for_each_chunk(pair, n, seed, |next, len| {
        let mut c = McCounts {
            n: len,
            ..McCounts::default()
        };
        for _ in 0..len {
            let (gm, ge) = next();
            let (exact, lower) = th.at(ge);
            c.spsc += (gm > ge) as u64;
            c.sop += (gm <= exact) as u64;
            c.sop_lower += (gm <= lower) as u64;
        }
        c
    })?;
    Ok(parts.into_iter().fold(McCounts::default(), |a, b| McCounts {
        n: a.n + b.n,
        spsc: a.spsc + b.spsc,
        sop: a.sop + b.sop,
        sop_lower: a.sop_lower + b.sop_lower,
    }))
}

/// The raw (γ_M, γ_E) stream behind [`mc_counts`] for the same arguments.
pub fn sample_pairs(pair: &WiretapPair, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    check_n(n)?;
    let parts = for_each_chunk(pair, n, seed, |next, len| (0..len).map(|_| next()).collect::<Vec<_>>())?;
    Ok(parts.into_iter().flatten().collect())
}

/// Per-draw outage indicators (exact, lower) for one realization.
pub fn outage_indicators(rate: f64, gamma_m: f64, gamma_e: f64) -> (bool, bool) {
    let (exact, lower) = Thresholds::new(rate).at(gamma_e);
    (gamma_m <= exact, gamma_m <= lower)
}

/// Fraction of draws with γ_M > γ_E.
pub fn mc_spsc(pair: &WiretapPair, n: usize, seed: u64) -> Result<McEstimate> {
    Ok(mc_counts(pair, n, seed)?.spsc(seed))
}

/// Fraction of draws in outage: γ_M <= e^R (1 + γ_E) - 1, or γ_M <= e^R γ_E
/// when `lower` is set.
pub fn mc_sop(pair: &WiretapPair, n: usize, seed: u64, lower: bool) -> Result<McEstimate> {
    let c = mc_counts(pair, n, seed)?;
    Ok(if lower { c.sop_lower(seed) } else { c.sop(seed) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::KappaMuParams;

    fn pair(km: f64, mm: f64, gm: f64, ke: f64, me: f64, ge: f64, rate: f64) -> WiretapPair {
        WiretapPair::new(
            KappaMuParams::new(km, mm, gm).unwrap(),
            KappaMuParams::new(ke, me, ge).unwrap(),
            rate,
        )
        .unwrap()
    }

    #[test]
    fn identical_channels() {
        let p = pair(2.0, 1.3, 1.7, 2.0, 1.3, 1.7, 0.0);
        let e = mc_spsc(&p, 1_000_000, 1).unwrap();
        assert!(e.brackets(0.5, 4.0), "{e:?}");
        let l = mc_sop(&p, 1_000_000, 2, true).unwrap();
        assert!(l.brackets(0.5, 4.0));
    }

    #[test]
    fn rayleigh_pair() {
        let p = pair(0.0, 1.0, 3.0, 0.0, 1.0, 1.0, 0.0);
        let e = mc_spsc(&p, 1_000_000, 9).unwrap();
        assert!(e.brackets(0.75, 4.0), "{e:?}");
    }

    #[test]
    fn reproducible_bit_for_bit() {
        let p = pair(4.0, 1.4, 2.0, 2.0, 1.2, 1.0, 1.2);
        let a = mc_counts(&p, 200_001, 77).unwrap();
        let b = mc_counts(&p, 200_001, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n, 200_001);
        assert_ne!(a, mc_counts(&p, 200_001, 78).unwrap());
    }

    #[test]
    fn counts_follow_the_pair_stream() {
        let p = pair(4.0, 1.4, 2.0, 2.0, 1.2, 1.0, 0.7);
        let n = CHUNK + 5000;
        let draws = sample_pairs(&p, n, 4).unwrap();
        let c = mc_counts(&p, n, 4).unwrap();
        let mut spsc = 0;
        let mut sop = 0;
        let mut low = 0;
        for &(gm, ge) in &draws {
            let (exact, lower) = outage_indicators(p.rate, gm, ge);
            // an outage under the bound is an outage under the exact event
            assert!(!lower || exact);
            spsc += (gm > ge) as u64;
            sop += exact as u64;
            low += lower as u64;
        }
        assert_eq!((c.spsc, c.sop, c.sop_lower), (spsc, sop, low));
    }

    #[test]
    fn std_error_scales_with_n() {
        let p = pair(1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 0.0);
        let a = mc_spsc(&p, 100_000, 5).unwrap();
        let b = mc_spsc(&p, 400_000, 5).unwrap();
        assert!((a.std_error / b.std_error - 2.0).abs() < 0.1);
    }

    #[test]
    fn too_few_draws() {
        let p = pair(1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 0.0);
        assert!(mc_spsc(&p, 999, 5).is_err());
    }
}
