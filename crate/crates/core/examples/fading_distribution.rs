//! κ-μ SNR law: density, distribution, sampling and the classical special
//! cases (Rayleigh, Rice, Nakagami-m, one-sided Gaussian).
//!
//! cargo run --example fading_distribution

use kappa_mu_secrecy::fading::{
    make_special_case, sample_snr, snr_cdf, snr_pdf, KappaMuParams, Scenario,
};
use kappa_mu_secrecy::specfun::SeriesControl;

fn main() -> kappa_mu_secrecy::Result<()> {
    let ctl = SeriesControl::default();
    let v2v = KappaMuParams::new(5.02, 0.70, 1.0)?;
    println!("gamma      pdf            cdf");
    for g in [0.1, 0.5, 1.0, 2.0, 4.0] {
        println!("{g:<6} {:>14.10} {:>14.10}", snr_pdf(&v2v, g)?, snr_cdf(&v2v, g, &ctl)?);
    }

    let n = 200_000;
    let draws = sample_snr(&v2v, n, 42)?;
    let mean = draws.iter().sum::<f64>() / n as f64;
    let below = draws.iter().filter(|&&g| g <= 1.0).count() as f64 / n as f64;
    println!("sample mean {mean:.4} (target 1), P(gamma <= 1) {below:.4} vs {:.4}", snr_cdf(&v2v, 1.0, &ctl)?);

    for s in [
        Scenario::Rayleigh,
        Scenario::Rice { k: 5.0 },
        Scenario::NakagamiM { m: 2.5 },
        Scenario::OneSidedGaussian,
    ] {
        let p = make_special_case(&s, 1.0)?;
        println!("{:<24} kappa {:<8.1e} mu {:<4} F(1) = {:.10}", s.to_string(), p.kappa, p.mu, snr_cdf(&p, 1.0, &ctl)?);
    }
    Ok(())
}
