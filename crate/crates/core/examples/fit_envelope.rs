//! Fit κ and μ to an envelope trace: synthesize a shadowed measurement,
//! remove the local mean, fit, and round-trip the trace through a file.
//!
//! cargo run --release --example fit_envelope

use kappa_mu_secrecy::estimate::io::{read_trace, write_binary, InputKind};
use kappa_mu_secrecy::estimate::{fit_kappa_mu, local_mean_normalize, synthetic_envelope, EnvelopeTrace, FitOptions};

fn main() -> kappa_mu_secrecy::Result<()> {
    // vehicle-to-vehicle shapes as ground truth
    let (kappa, mu) = (5.02, 0.70);
    let clean = synthetic_envelope(kappa, mu, 1.04, 100_000, 3)?;
    let f = fit_kappa_mu(&clean, &FitOptions::default())?;
    println!(
        "clean:    kappa {:.3} mu {:.3} r_hat {:.3} residual {:.2e} (start {}, {} iterations)",
        f.kappa_hat, f.mu_hat, f.r_hat, f.residual, f.start_index, f.iterations
    );

    // slow log-normal-like shadowing over ~20k samples
    let shadowed: Vec<f64> = clean
        .samples
        .iter()
        .enumerate()
        .map(|(i, r)| r * 10f64.powf(0.3 * (i as f64 / 3000.0).sin()))
        .collect();
    let shadowed = EnvelopeTrace::new(shadowed, Some(1000.0))?;
    let raw = fit_kappa_mu(&shadowed, &FitOptions::default())?;
    let norm = fit_kappa_mu(&local_mean_normalize(&shadowed, 501)?, &FitOptions::default())?;
    println!("shadowed: kappa {:.3} mu {:.3} residual {:.2e}", raw.kappa_hat, raw.mu_hat, raw.residual);
    println!("window:   kappa {:.3} mu {:.3} residual {:.2e}", norm.kappa_hat, norm.mu_hat, norm.residual);

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("trace.bin");
    write_binary(&path, &shadowed)?;
    let back = read_trace(&path, InputKind::Envelope)?;
    // binary traces store f32
    let worst = back
        .samples
        .iter()
        .zip(&shadowed.samples)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    println!("binary round trip: {} samples, max relative change {worst:.1e}", back.len());
    Ok(())
}
