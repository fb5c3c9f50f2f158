//! Monte Carlo oracle: reproducible counts from one shared stream of
//! (γ_M, γ_E) draws, compared with the series values.
//!
//! cargo run --release --example monte_carlo

use kappa_mu_secrecy::fading::KappaMuParams;
use kappa_mu_secrecy::montecarlo::mc_counts;
use kappa_mu_secrecy::secrecy::{sop_exact, sop_lower, spsc_series, WiretapPair};
use kappa_mu_secrecy::specfun::quad::QuadControl;
use kappa_mu_secrecy::specfun::SeriesControl;

fn main() -> kappa_mu_secrecy::Result<()> {
    // on-body measured shapes, main link 3 dB stronger
    let pair = WiretapPair::new(
        KappaMuParams::new(2.92, 0.75, 2.0)?,
        KappaMuParams::new(3.60, 0.67, 1.0)?,
        0.5,
    )?;
    let seed = 2024;
    let c = mc_counts(&pair, 2_000_000, seed)?;
    let rows = [
        ("spsc", c.spsc(seed), spsc_series(&pair, &SeriesControl::default())?.value),
        ("sop", c.sop(seed), sop_exact(&pair, &QuadControl::default())?.value),
        ("sop_lower", c.sop_lower(seed), sop_lower(&pair, &SeriesControl::default())?.value),
    ];
    for (name, mc, analytic) in rows {
        println!(
            "{name:<10} mc {:.5} +- {:.5}  analytic {analytic:.5}  within 3 se: {}",
            mc.estimate,
            mc.std_error,
            mc.brackets(analytic, 3.0)
        );
    }
    let again = mc_counts(&pair, 2_000_000, seed)?;
    println!("same seed reproduces counts: {}", again == c);
    Ok(())
}
