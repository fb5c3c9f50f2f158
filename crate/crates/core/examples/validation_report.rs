//! Cross-check every evaluation path over the small validation grid and
//! show that a perturbed engine is caught.
//!
//! cargo run --release --example validation_report

use kappa_mu_secrecy::validation::{run_validation, small_grid, Tolerances};

fn main() -> kappa_mu_secrecy::Result<()> {
    let grid = small_grid();
    for perturb in [0.0, 1e-3] {
        let report = run_validation(&grid, 200_000, 1, &Tolerances::default(), perturb)?;
        println!("perturbation {perturb:e}: pass = {}", report.pass);
        for c in &report.checks {
            println!(
                "  {:<24} max {:>10.3e} {:<5} tol {:<8e} {}",
                c.name,
                c.max,
                c.unit,
                c.tolerance,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
