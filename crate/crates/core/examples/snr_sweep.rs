//! Sweep the main-channel average SNR for each figure preset and print
//! SPSC and outage at a few points.
//!
//! cargo run --example snr_sweep

use kappa_mu_secrecy::cli::presets::Preset;
use kappa_mu_secrecy::fading::KappaMuParams;
use kappa_mu_secrecy::secrecy::{sop_exact, spsc_series, WiretapPair};
use kappa_mu_secrecy::specfun::quad::QuadControl;
use kappa_mu_secrecy::specfun::SeriesControl;

fn main() -> kappa_mu_secrecy::Result<()> {
    let dbs = [-10.0, 0.0, 10.0, 20.0, 30.0];
    print!("{:<20}", "preset");
    for db in dbs {
        print!(" {:>16}", format!("{db} dB spsc/sop"));
    }
    println!();
    for preset in Preset::all() {
        let v = preset.values();
        print!("{:<20}", format!("{preset:?}"));
        for db in dbs {
            let pair = WiretapPair::new(
                KappaMuParams::new(v.kappa_m, v.mu_m, 10f64.powf(db / 10.0))?,
                KappaMuParams::new(v.kappa_e, v.mu_e, 1.0)?,
                v.rate,
            )?;
            let s = spsc_series(&pair, &SeriesControl::default())?.value;
            let o = sop_exact(&pair, &QuadControl::default())?.value;
            print!(" {:>16}", format!("{s:.4}/{o:.4}"));
        }
        println!();
    }
    Ok(())
}
