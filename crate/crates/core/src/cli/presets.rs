use crate::fading::KAPPA_EPSILON;
use crate::validation::ONE_DB_RATE;
use clap::ValueEnum;

/// Named channel configurations. κ → 0 limits use [`KAPPA_EPSILON`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Rice/Rice, κ_M = 15, κ_E = 12, μ = 1
    #[value(name = "fig2-rice")]
    Fig2Rice,
    /// Nakagami-m/Nakagami-m, m = 2
    #[value(name = "fig2-nakagami")]
    Fig2Nakagami,
    /// Rayleigh/Rayleigh
    #[value(name = "fig2-rayleigh", alias = "rayleigh")]
    Fig2Rayleigh,
    /// Nakagami-m (μ_M = 1.2) / one-sided Gaussian
    #[value(name = "fig3-nakagami-osg")]
    Fig3NakagamiOsg,
    /// κ-μ (κ_M = 5, μ_M = 1.2) / one-sided Gaussian
    #[value(name = "fig3-kappamu-osg")]
    Fig3KappaMuOsg,
    /// one-sided Gaussian / one-sided Gaussian
    #[value(name = "fig3-osg-osg")]
    Fig3OsgOsg,
    /// Rice (κ_M = 5) / Nakagami-m (μ_E = 1.2)
    #[value(name = "fig3-rice-nakagami")]
    Fig3RiceNakagami,
    /// κ_M = 4, μ_M = 1.4, κ_E = 2, μ_E = 1.2, R = 10^{0.1} nats
    #[value(name = "fig4", alias = "fig4-k4")]
    Fig4,
    /// as fig4 with κ_M = 10
    #[value(name = "fig4-k10")]
    Fig4K10,
    /// measured device-to-device fit
    D2d,
    /// measured on-body fit
    Ban,
    /// measured vehicle-to-vehicle fit
    V2v,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetValues {
    pub kappa_m: f64,
    pub mu_m: f64,
    pub kappa_e: f64,
    pub mu_e: f64,
    pub rate: f64,
}

impl Preset {
    pub fn values(self) -> PresetValues {
        let e = KAPPA_EPSILON;
        let (kappa_m, mu_m, kappa_e, mu_e, rate) = match self {
            Preset::Fig2Rice => (15.0, 1.0, 12.0, 1.0, 0.0),
            Preset::Fig2Nakagami => (e, 2.0, e, 2.0, 0.0),
            Preset::Fig2Rayleigh => (e, 1.0, e, 1.0, 0.0),
            Preset::Fig3NakagamiOsg => (e, 1.2, e, 0.5, 0.0),
            Preset::Fig3KappaMuOsg => (5.0, 1.2, e, 0.5, 0.0),
            Preset::Fig3OsgOsg => (e, 0.5, e, 0.5, 0.0),
            Preset::Fig3RiceNakagami => (5.0, 1.0, e, 1.2, 0.0),
            Preset::Fig4 => (4.0, 1.4, 2.0, 1.2, ONE_DB_RATE),
            Preset::Fig4K10 => (10.0, 1.4, 2.0, 1.2, ONE_DB_RATE),
            Preset::D2d => (1.07, 0.91, 1.11, 0.92, 0.0),
            Preset::Ban => (2.92, 0.75, 3.60, 0.67, 0.0),
            Preset::V2v => (5.02, 0.70, 7.17, 0.60, 0.0),
        };
        PresetValues {
            kappa_m,
            mu_m,
            kappa_e,
            mu_e,
            rate,
        }
    }

    pub fn all() -> &'static [Preset] {
        Preset::value_variants()
    }
}
