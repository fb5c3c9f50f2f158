//! Special-function kernel: Marcum Q against its quadrature oracle, plus
//! Bessel I, incomplete gamma and 2F1 spot values.
//!
//! cargo run --example special_functions

use kappa_mu_secrecy::specfun::{
    bessel_i, gamma_q, gauss_2f1, marcum_q, marcum_q_reference, regularized_beta, SeriesControl,
};

fn main() -> kappa_mu_secrecy::Result<()> {
    let ctl = SeriesControl::default();
    println!("{:>5} {:>5} {:>5} {:>20} {:>20} {:>10}", "m", "a", "b", "series", "quadrature", "est_err");
    for &(m, a, b) in &[(0.5, 1.0, 1.0), (1.4, 2.0, 2.0), (3.5, 0.5, 4.0), (2.0, 4.0, 1.0)] {
        let q = marcum_q(m, a, b, &ctl)?;
        let r = marcum_q_reference(m, a, b)?;
        println!("{m:>5} {a:>5} {b:>5} {:>20.15} {r:>20.15} {:>10.2e}", q.value, q.est_error);
    }
    println!("I_0.3(2.5)         = {:.15}", bessel_i(0.3, 2.5)?);
    println!("Q(2.5, 3)          = {:.15}", gamma_q(2.5, 3.0)?);
    println!("I_0.4(1.2, 0.9)    = {:.15}", regularized_beta(1.2, 0.9, 0.4)?);
    println!("2F1(1, 2; 2; 0.9)  = {:.15} (exact 10)", gauss_2f1(1.0, 2.0, 2.0, 0.9, &ctl)?);
    Ok(())
}
