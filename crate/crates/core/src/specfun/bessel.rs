use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};
use std::f64::consts::PI;

const SERIES_MAX_X: f64 = 30.0;
const MAX_ITER: usize = 200_000;
const RESCALE_AT: f64 = 1e250;

/// Maps the order onto the range handled by the evaluators.
///
/// Negative integer orders use I_{-m} = I_m. Orders in (-1, 0) are kept as
/// they are since the power series is valid there; anything below is
/// rejected.
fn normalize_order(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::domain("bessel_i", format!("order {v} is not finite")));
    }
    if v >= 0.0 {
        return Ok(v);
    }
    if v == v.round() {
        return Ok(-v);
    }
    if v > -1.0 {
        return Ok(v);
    }
    Err(Error::domain(
        "bessel_i",
        format!("negative non-integer order {v} below -1 is not supported"),
    ))
}

// ln of the power series, rescaling the partial sum to keep it finite.
fn ln_series(v: f64, x: f64) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut ln_scale = 0.0_f64;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= q / (kf * (v + kf));
        sum += term;
        if sum > RESCALE_AT {
            sum /= RESCALE_AT;
            term /= RESCALE_AT;
            ln_scale += RESCALE_AT.ln();
        }
        if kf > 0.5 * x && term < sum * 1e-17 {
            return Ok(v * (0.5 * x).ln() - ln_gamma_unchecked(v + 1.0) + sum.ln() + ln_scale);
        }
    }
    Err(Error::NonConvergence {
        func: "bessel_i",
        terms: MAX_ITER,
        tail: term,
    })
}

// ln(e^{-x} I_v(x)) from the large-argument expansion.
fn ln_scaled_asymptotic(v: f64, x: f64) -> f64 {
    let mu = 4.0 * v * v;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut prev_abs = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        let a = term.abs();
        if a > prev_abs {
            // asymptotic series started diverging; drop this term
            break;
        }
        sum += term;
        prev_abs = a;
        if a < 1e-17 * sum.abs() {
            break;
        }
    }
    sum.ln() - 0.5 * (2.0 * PI * x).ln()
}

fn use_asymptotic(v: f64, x: f64) -> bool {
    x > SERIES_MAX_X && x > v * v
}

/// ln I_v(x). Returns `-inf` where I_v(x) = 0 (x = 0, v > 0) and `+inf`
/// where it diverges (x = 0, -1 < v < 0).
pub fn ln_bessel_i(v: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("bessel_i", format!("x = {x} must be nonnegative")));
    }
    let v = normalize_order(v)?;
    if x == 0.0 {
        return Ok(if v == 0.0 {
            0.0
        } else if v > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if use_asymptotic(v, x) {
        Ok(ln_scaled_asymptotic(v, x) + x)
    } else {
        ln_series(v, x)
    }
}

/// Modified Bessel function of the first kind, I_v(x).
///
/// Overflows to `inf` near x ≈ 700; use [`bessel_i_scaled`] inside larger
/// expressions.
pub fn bessel_i(v: f64, x: f64) -> Result<f64> {
    Ok(ln_bessel_i(v, x)?.exp())
}

/// Exponentially scaled e^{-x} I_v(x).
pub fn bessel_i_scaled(v: f64, x: f64) -> Result<f64> {
    let ln_i = ln_bessel_i(v, x)?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok((ln_i - x).exp())
}
