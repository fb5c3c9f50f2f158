use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Upper bound on the bin count; heavy tails would otherwise produce
/// mostly-empty histograms under the Freedman–Diaconis rule.
pub const MAX_BINS: usize = 4096;

/// A density-normalized histogram with equal-width bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub start: f64,
    pub width: f64,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.density.len()).map(move |i| self.start + (i as f64 + 0.5) * self.width)
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Freedman–Diaconis width 2 IQR n^{-1/3}.
pub fn freedman_diaconis_width(sorted: &[f64]) -> Result<f64> {
    if sorted.len() < 2 {
        return Err(Error::DegenerateHistogram("need at least two samples".into()));
    }
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    if !(iqr > 0.0) {
        return Err(Error::DegenerateHistogram(
            "interquartile range is zero (constant or near-constant trace)".into(),
        ));
    }
    Ok(2.0 * iqr * (sorted.len() as f64).powf(-1.0 / 3.0))
}

pub fn histogram(samples: &[f64], bin_width: Option<f64>) -> Result<Histogram> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let width = match bin_width {
        Some(w) if w > 0.0 && w.is_finite() => w,
        Some(w) => return Err(Error::InvalidParameter(format!("bin width {w} must be positive"))),
        None => freedman_diaconis_width(&sorted)?,
    };
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if !(hi > lo) {
        return Err(Error::DegenerateHistogram("all samples are equal".into()));
    }
    let mut bins = ((hi - lo) / width).ceil().max(1.0) as usize;
    let mut width = width;
    if bins > MAX_BINS {
        bins = MAX_BINS;
        width = (hi - lo) / bins as f64;
    }
    let mut counts = vec![0u64; bins];
    for &x in &sorted {
        let i = (((x - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let norm = 1.0 / (sorted.len() as f64 * width);
    Ok(Histogram {
        start: lo,
        width,
        density: counts.iter().map(|&c| c as f64 * norm).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_integrates_to_one() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin().abs()).collect();
        let h = histogram(&xs, None).unwrap();
        let mass: f64 = h.density.iter().sum::<f64>() * h.width;
        assert!((mass - 1.0).abs() < 1e-12);
        assert_eq!(h.centers().count(), h.density.len());
    }

    #[test]
    fn quantiles() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&s, 0.5), 3.0);
        assert_eq!(quantile_sorted(&s, 0.25), 2.0);
        assert_eq!(quantile_sorted(&s, 0.1), 1.4);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            histogram(&[2.0; 50], None).unwrap_err(),
            Error::DegenerateHistogram(_)
        ));
        let mut mostly = vec![1.0; 100];
        mostly[0] = 3.0;
        assert!(histogram(&mostly, None).is_err());
        assert!(histogram(&[1.0, 2.0], Some(-1.0)).is_err());
    }

    #[test]
    fn explicit_width() {
        let h = histogram(&[0.0, 0.1, 0.2, 0.9, 1.0], Some(0.5)).unwrap();
        assert_eq!(h.density.len(), 2);
        assert!((h.density[0] - 3.0 / 2.5).abs() < 1e-12);
    }
}
