use kappa_mu_secrecy::estimate::{fit_kappa_mu, local_mean_normalize, synthetic_envelope, FitOptions};
use kappa_mu_secrecy::fading::KAPPA_EPSILON;

#[test]
fn rayleigh_draws_fit_near_zero_kappa() {
    let t = synthetic_envelope(KAPPA_EPSILON, 1.0, 1.0, 100_000, 5).unwrap();
    let f = fit_kappa_mu(&t, &FitOptions::default()).unwrap();
    assert!(f.kappa_hat <= 0.1, "{f:?}");
    assert!((0.9..=1.1).contains(&f.mu_hat), "{f:?}");
}

// A single V2V fit at this size lands outside 15% for roughly one seed in
// five (κ̂ spread about 11%), so the claim is checked across seeds.
#[test]
fn v2v_refit_at_half_sample() {
    let fits: Vec<_> = (0..8)
        .map(|seed| {
            let t = synthetic_envelope(5.02, 0.70, 1.04, 50_000, 100 + seed).unwrap();
            fit_kappa_mu(&t, &FitOptions::default()).unwrap()
        })
        .collect();
    let inside = fits
        .iter()
        .filter(|f| (f.kappa_hat / 5.02 - 1.0).abs() <= 0.15 && (f.mu_hat / 0.70 - 1.0).abs() <= 0.15)
        .count();
    let mean_k = fits.iter().map(|f| f.kappa_hat).sum::<f64>() / 8.0;
    let mean_m = fits.iter().map(|f| f.mu_hat).sum::<f64>() / 8.0;
    assert!(inside >= 5, "{inside}/8 within 15%");
    assert!((mean_k / 5.02 - 1.0).abs() <= 0.1, "mean kappa {mean_k}");
    assert!((mean_m / 0.70 - 1.0).abs() <= 0.1, "mean mu {mean_m}");
    assert!(fits.iter().all(|f| (f.r_hat / 1.04 - 1.0).abs() < 0.02));
}

#[test]
fn normalizing_stationary_data_barely_moves_the_fit() {
    let t = synthetic_envelope(2.92, 0.75, 1.17, 100_000, 8).unwrap();
    let a = fit_kappa_mu(&t, &FitOptions::default()).unwrap();
    let b = fit_kappa_mu(&local_mean_normalize(&t, 2001).unwrap(), &FitOptions::default()).unwrap();
    assert!((a.kappa_hat / b.kappa_hat - 1.0).abs() < 0.1, "{a:?} {b:?}");
    assert!((a.mu_hat / b.mu_hat - 1.0).abs() < 0.1, "{a:?} {b:?}");
}

#[test]
fn residual_history_never_rises() {
    let t = synthetic_envelope(1.07, 0.91, 1.22, 20_000, 9).unwrap();
    let f = fit_kappa_mu(&t, &FitOptions::default()).unwrap();
    assert!(!f.residual_history.is_empty());
    assert!(f.residual_history.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(*f.residual_history.last().unwrap(), f.residual);
}

#[test]
fn fit_is_deterministic() {
    let t = synthetic_envelope(2.0, 1.5, 1.0, 20_000, 10).unwrap();
    let a = fit_kappa_mu(&t, &FitOptions::default()).unwrap();
    let b = fit_kappa_mu(&t, &FitOptions::default()).unwrap();
    assert_eq!(a.kappa_hat.to_bits(), b.kappa_hat.to_bits());
    assert_eq!(a.start_index, b.start_index);
}
