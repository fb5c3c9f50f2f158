//! Gauss hypergeometric ₂F₁ on [0, 1) and the regularized incomplete beta
//! function, which share one continued fraction.

use super::gamma::ln_gamma_unchecked;
use super::SeriesControl;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Gauss continued fraction for ₂F₁(1, b; c; z), valid for c > 0, z < 1.
///
/// In incomplete-beta variables (p = c - 1, q = b - c + 1) this is the
/// classical Lentz evaluation of I_z(p, q) without its prefactor.
fn cf_2f1_unit_a(b: f64, c: f64, z: f64, max_terms: usize) -> Result<f64> {
    let p = c - 1.0;
    let q = b - c + 1.0;
    let qab = b;
    let qap = c;
    let qam = c - 2.0;
    let mut cc = 1.0;
    let mut d = 1.0 - qab * z / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=max_terms {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        let aa = mf * (q - mf) * z / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        cc = 1.0 + aa / cc;
        if cc.abs() < TINY {
            cc = TINY;
        }
        d = 1.0 / d;
        h *= d * cc;
        let aa = -(p + mf) * (qab + mf) * z / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        cc = 1.0 + aa / cc;
        if cc.abs() < TINY {
            cc = TINY;
        }
        d = 1.0 / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence {
        func: "gauss_2f1",
        terms: max_terms,
        tail: f64::NAN,
    })
}

// ln of z^p (1-z)^q / (p B(p, q))
fn ln_beta_prefactor(p: f64, q: f64, z: f64) -> f64 {
    p * z.ln() + q * (1.0 - z).ln() + ln_gamma_unchecked(p + q)
        - ln_gamma_unchecked(p)
        - ln_gamma_unchecked(q)
        - p.ln()
}

/// Regularized incomplete beta I_z(p, q) for p, q > 0 and z in [0, 1].
pub fn regularized_beta(p: f64, q: f64, z: f64) -> Result<f64> {
    if !(p > 0.0) || !(q > 0.0) {
        return Err(Error::domain(
            "regularized_beta",
            format!("shape parameters must be positive (p = {p}, q = {q})"),
        ));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain("regularized_beta", format!("z = {z} outside [0, 1]")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        return Ok(1.0);
    }
    let max_terms = 20_000;
    if z < (p + 1.0) / (p + q + 2.0) {
        let cf = cf_2f1_unit_a(p + q, p + 1.0, z, max_terms)?;
        Ok((ln_beta_prefactor(p, q, z) + cf.ln()).exp().min(1.0))
    } else {
        let w = 1.0 - z;
        let cf = cf_2f1_unit_a(p + q, q + 1.0, w, max_terms)?;
        Ok((1.0 - (ln_beta_prefactor(q, p, w) + cf.ln()).exp()).max(0.0))
    }
}

fn direct_series(a: f64, b: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    // Kahan-compensated partial sums of Σ (a)_j (b)_j / ((c)_j j!) z^j
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    for j in 0..ctl.max_terms {
        let jf = j as f64;
        let ratio = (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * z;
        term *= ratio;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term == 0.0 {
            return Ok(sum);
        }
        if ratio.abs() < 1.0 {
            let tail = term.abs() * ratio.abs() / (1.0 - ratio.abs());
            if tail <= EPS * sum.abs() {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence {
        func: "gauss_2f1",
        terms: ctl.max_terms,
        tail: term.abs(),
    })
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for z in [0, 1).
///
/// For z <= 1/2 the hypergeometric series is summed directly. Above that only
/// `a = 1` is supported (the only case the secrecy series need): when the
/// parameters correspond to an incomplete beta past its mean the value is
/// recovered from the complementary incomplete beta, otherwise from Gauss's
/// continued fraction.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    ctl.validate()?;
    if !(c > 0.0) && c == c.round() {
        return Err(Error::domain("gauss_2f1", format!("c = {c} is a nonpositive integer")));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain("gauss_2f1", format!("z = {z} outside [0, 1)")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z <= 0.5 {
        return direct_series(a, b, c, z, ctl);
    }
    if a != 1.0 {
        return Err(Error::domain(
            "gauss_2f1",
            format!("z = {z} > 0.5 is only supported for a = 1 (got a = {a})"),
        ));
    }
    if !(c > 0.0) {
        return Err(Error::domain("gauss_2f1", format!("c = {c} must be positive for z > 0.5")));
    }
    let p = c - 1.0;
    let q = b - c + 1.0;
    if p > 0.0 && q > 0.0 && z >= (p + 1.0) / (p + q + 2.0) {
        let w = 1.0 - z;
        let cf = cf_2f1_unit_a(b, q + 1.0, w, ctl.max_terms)?;
        let complement = (ln_beta_prefactor(q, p, w) + cf.ln()).exp();
        return Ok(((1.0 - complement).ln() - ln_beta_prefactor(p, q, z)).exp());
    }
    cf_2f1_unit_a(b, c, z, ctl.max_terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(gauss_2f1(1.0, 3.7, 2.2, 0.0, &ctl()).unwrap(), 1.0);
        let v = gauss_2f1(1.0, 2.0, 2.0, 0.25, &ctl()).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn against_long_direct_series() {
        // mpmath: 10_000-term direct series at 30 digits
        let v = gauss_2f1(1.0, 4.1, 2.6, 0.62, &ctl()).unwrap();
        assert!((v / 5.59820296468868316983 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_identity() {
        for &b in &[0.5, 2.0, 7.0] {
            for &z in &[0.1, 0.5, 0.9] {
                let v = gauss_2f1(1.0, b, b, z, &ctl()).unwrap();
                assert!((v - 1.0 / (1.0 - z)).abs() < 1e-12 * v, "b={b} z={z} v={v}");
            }
        }
    }

    #[test]
    fn continued_fraction_matches_series_on_overlap() {
        for &(b, c) in &[(3.3, 1.4), (0.7, 2.5), (12.0, 3.0), (1.5, 0.6)] {
            for &z in &[0.05, 0.3, 0.5] {
                let s = direct_series(1.0, b, c, z, &ctl()).unwrap();
                let f = cf_2f1_unit_a(b, c, z, 10_000).unwrap();
                assert!((s / f - 1.0).abs() < 1e-13, "b={b} c={c} z={z}");
            }
        }
    }

    #[test]
    fn at_least_one_for_positive_parameters() {
        for &z in &[0.0, 0.2, 0.6, 0.95, 0.999] {
            let v = gauss_2f1(1.0, 2.7, 1.9, z, &ctl()).unwrap();
            assert!(v >= 1.0);
        }
    }

    #[test]
    fn beta_known_values() {
        // I_z(1, 1) = z, I_z(a, 1) = z^a, I_z(1, b) = 1 - (1-z)^b
        for &z in &[0.01, 0.3, 0.77, 0.999] {
            assert!((regularized_beta(1.0, 1.0, z).unwrap() - z).abs() < 1e-15);
            assert!((regularized_beta(2.5, 1.0, z).unwrap() - z.powf(2.5)).abs() < 1e-14);
            let want = 1.0 - (1.0 - z).powf(3.2);
            assert!((regularized_beta(1.0, 3.2, z).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_symmetry() {
        for &(p, q) in &[(0.9, 1.4), (7.0, 2.0), (40.0, 55.5)] {
            for &z in &[0.1, 0.45, 0.8] {
                let a = regularized_beta(p, q, z).unwrap();
                let b = regularized_beta(q, p, 1.0 - z).unwrap();
                assert!((a + b - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gauss_2f1(1.0, 1.0, -2.0, 0.3, &ctl()).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.0, &ctl()).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, -0.1, &ctl()).is_err());
        assert!(gauss_2f1(2.0, 1.0, 2.0, 0.7, &ctl()).is_err());
        assert!(regularized_beta(0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn term_cap_reports_non_convergence() {
        let tight = SeriesControl::new(1e-12, 1e-10, 3).unwrap();
        let err = gauss_2f1(1.0, 5.0, 2.0, 0.45, &tight).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
