//! SPSC and secrecy outage for one wiretap configuration, by every
//! analytic path the crate offers.
//!
//! cargo run --example secrecy_metrics

use kappa_mu_secrecy::fading::KappaMuParams;
use kappa_mu_secrecy::secrecy::{
    secrecy_capacity, sop_exact, sop_lower, spsc_closed_form, spsc_quadrature, spsc_series, WiretapPair,
};
use kappa_mu_secrecy::specfun::quad::QuadControl;
use kappa_mu_secrecy::specfun::SeriesControl;
use kappa_mu_secrecy::validation::ONE_DB_RATE;

fn main() -> kappa_mu_secrecy::Result<()> {
    let ctl = SeriesControl::default();
    let qc = QuadControl::default();

    // integer μ: series, closed form and quadrature should agree
    let pair = WiretapPair::new(KappaMuParams::new(2.0, 2.0, 4.0)?, KappaMuParams::new(1.0, 3.0, 1.0)?, 0.5)?;
    for r in [spsc_series(&pair, &ctl)?, spsc_closed_form(&pair)?, spsc_quadrature(&pair, &qc)?] {
        println!("SPSC {:<12} {:.15}  terms ({}, {})  err {:.1e}", r.method.as_str(), r.value, r.terms_k, r.terms_l, r.est_error);
    }

    // noninteger μ: outage and its lower bound along the main-channel SNR
    let base = WiretapPair::new(KappaMuParams::new(4.0, 1.4, 1.0)?, KappaMuParams::new(2.0, 1.2, 1.0)?, ONE_DB_RATE)?;
    println!("\n B(dB)   SOP          SOP lower");
    for db in [0.0, 5.0, 10.0, 15.0, 20.0] {
        let p = base.with_main_gamma_bar(10f64.powf(db / 10.0));
        println!("{db:>6} {:>12.8} {:>12.8}", sop_exact(&p, &qc)?.value, sop_lower(&p, &ctl)?.value);
    }
    println!("\nC_s(gamma_M = 10, gamma_E = 1) = {:.6} nats", secrecy_capacity(10.0, 1.0));
    Ok(())
}
