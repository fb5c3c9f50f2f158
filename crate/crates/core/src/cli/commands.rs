use super::output::{csv_table, emit};
use super::presets::PresetValues;
use super::{
    Bound, ChannelArgs, Failure, FitArgs, Format, GridSize, InputKindArg, McArgs, RateArgs, SopArgs, SopMethod,
    SpscArgs, SpscMethod, SweepArgs, SweepVariable, ValidateArgs, SCHEMA_VERSION,
};
use crate::estimate::io::{read_trace, InputKind};
use crate::estimate::{fit_kappa_mu, local_mean_normalize, pdf_grid, FitOptions};
use crate::fading::KappaMuParams;
use crate::montecarlo::{mc_counts, McEstimate};
use crate::secrecy::{
    sop_exact, sop_lower, spsc_closed_form, spsc_quadrature, spsc_series, EvalResult, Method, WiretapPair,
    CLOSED_FORM_KAPPA_MIN,
};
use crate::specfun::quad::QuadControl;
use crate::specfun::SeriesControl;
use crate::validation::{full_grid, run_validation, small_grid, Tolerances};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::LN_2;

/// Shortest round-trip text for a float, in exponent form outside [1e-4, 1e15).
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn resolve_pair(ch: &ChannelArgs, rate: Option<&RateArgs>) -> Result<WiretapPair, Failure> {
    let base: Option<PresetValues> = ch.preset.map(|p| p.values());
    let pick = |flag: Option<f64>, from: fn(&PresetValues) -> f64, name: &str| {
        flag.or(base.as_ref().map(from))
            .ok_or_else(|| Failure::usage(format!("missing --{name} (or choose a --preset)")))
    };
    let kappa_m = pick(ch.km, |p| p.kappa_m, "km")?;
    let mu_m = pick(ch.um, |p| p.mu_m, "um")?;
    let kappa_e = pick(ch.ke, |p| p.kappa_e, "ke")?;
    let mu_e = pick(ch.ue, |p| p.mu_e, "ue")?;
    let gbar = |lin: Option<f64>, db: Option<f64>| lin.or(db.map(db_to_linear)).unwrap_or(1.0);
    let gbar_m = gbar(ch.gbar_m_linear, ch.gbar_m_db);
    let gbar_e = gbar(ch.gbar_e_linear, ch.gbar_e_db);
    let rate = match rate {
        Some(r) => r
            .rate_nats
            .or(r.rate_bits.map(|b| b * LN_2))
            .or(base.map(|p| p.rate))
            .unwrap_or(0.0),
        None => 0.0,
    };
    let main = KappaMuParams::new(kappa_m, mu_m, gbar_m)?;
    let eve = KappaMuParams::new(kappa_e, mu_e, gbar_e)?;
    Ok(WiretapPair::new(main, eve, rate)?)
}

fn is_integer(x: f64) -> bool {
    x >= 1.0 && x.fract() == 0.0
}

fn closed_form_applies(p: &WiretapPair) -> bool {
    is_integer(p.main.mu)
        && is_integer(p.eve.mu)
        && p.main.kappa >= CLOSED_FORM_KAPPA_MIN
        && p.eve.kappa >= CLOSED_FORM_KAPPA_MIN
}

fn spsc_auto(p: &WiretapPair) -> crate::Result<EvalResult> {
    if closed_form_applies(p) {
        spsc_closed_form(p)
    } else {
        spsc_series(p, &SeriesControl::default())
    }
}

fn mc_result(e: McEstimate) -> EvalResult {
    EvalResult {
        value: e.estimate,
        terms_k: 0,
        terms_l: 0,
        est_error: e.std_error,
        method: Method::MonteCarlo,
    }
}

fn channel_json(p: &KappaMuParams) -> Value {
    json!({"kappa": p.kappa, "mu": p.mu, "gamma_bar": p.gamma_bar})
}

fn emit_record(metric: &str, r: &EvalResult, pair: &WiretapPair, mc: Option<&McArgs>, format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let mut v = json!({
                "schema": SCHEMA_VERSION,
                "metric": metric,
                "value": r.value,
                "method": r.method,
                "terms_k": r.terms_k,
                "terms_l": r.terms_l,
                "est_error": r.est_error,
                "main": channel_json(&pair.main),
                "eve": channel_json(&pair.eve),
                "rate_nats": pair.rate,
            });
            if let Some(m) = mc {
                v["seed"] = json!(m.seed);
                v["n"] = json!(m.mc_n);
            }
            emit(&format!("{v}\n"), None)
        }
        Format::Csv => {
            let header = [
                "metric", "value", "method", "terms_k", "terms_l", "est_error", "kappa_m", "mu_m", "gamma_bar_m",
                "kappa_e", "mu_e", "gamma_bar_e", "rate_nats",
            ];
            let row = vec![
                metric.to_string(),
                num(r.value),
                r.method.to_string(),
                r.terms_k.to_string(),
                r.terms_l.to_string(),
                num(r.est_error),
                num(pair.main.kappa),
                num(pair.main.mu),
                num(pair.main.gamma_bar),
                num(pair.eve.kappa),
                num(pair.eve.mu),
                num(pair.eve.gamma_bar),
                num(pair.rate),
            ];
            emit(&csv_table(&header, &[row])?, None)
        }
    }
}

pub fn spsc(a: &SpscArgs) -> Result<(), Failure> {
    let pair = resolve_pair(&a.channel, None)?;
    let (r, mc) = match a.method {
        SpscMethod::Auto => (spsc_auto(&pair)?, None),
        SpscMethod::Series => (spsc_series(&pair, &SeriesControl::default())?, None),
        SpscMethod::Closed => (spsc_closed_form(&pair)?, None),
        SpscMethod::Quadrature => (spsc_quadrature(&pair, &QuadControl::default())?, None),
        SpscMethod::Mc => (
            mc_result(mc_counts(&pair, a.mc.mc_n, a.mc.seed)?.spsc(a.mc.seed)),
            Some(&a.mc),
        ),
    };
    emit_record("spsc", &r, &pair, mc, a.format)
}

pub fn sop(a: &SopArgs) -> Result<(), Failure> {
    let pair = resolve_pair(&a.channel, Some(&a.rate))?;
    let ctl = SeriesControl::default();
    let qc = QuadControl::default();
    let (r, mc) = match (a.bound, a.method) {
        (Bound::Exact, SopMethod::Auto | SopMethod::Quadrature) => (sop_exact(&pair, &qc)?, None),
        (Bound::Lower, SopMethod::Auto | SopMethod::Series) => (sop_lower(&pair, &ctl)?, None),
        (Bound::Exact, SopMethod::Series) => {
            return Err(Failure::usage("the exact outage has no series form; use --method quadrature or mc"))
        }
        (Bound::Lower, SopMethod::Quadrature) => {
            return Err(Failure::usage("the lower bound is evaluated by series; use --method series or mc"))
        }
        (b, SopMethod::Mc) => {
            let c = mc_counts(&pair, a.mc.mc_n, a.mc.seed)?;
            let e = if b == Bound::Lower { c.sop_lower(a.mc.seed) } else { c.sop(a.mc.seed) };
            (mc_result(e), Some(&a.mc))
        }
    };
    let metric = match a.bound {
        Bound::Exact => "sop_exact",
        Bound::Lower => "sop_lower",
    };
    emit_record(metric, &r, &pair, mc, a.format)
}

fn variable_name(v: SweepVariable) -> &'static str {
    match v {
        SweepVariable::GammaBarMDb => "gamma_bar_m_db",
        SweepVariable::GammaBarEDb => "gamma_bar_e_db",
        SweepVariable::KappaM => "kappa_m",
        SweepVariable::KappaE => "kappa_e",
        SweepVariable::MuM => "mu_m",
        SweepVariable::MuE => "mu_e",
        SweepVariable::Rate => "rate",
    }
}

fn apply(base: &WiretapPair, v: SweepVariable, x: f64) -> crate::Result<WiretapPair> {
    let mut p = *base;
    match v {
        SweepVariable::GammaBarMDb => p.main.gamma_bar = db_to_linear(x),
        SweepVariable::GammaBarEDb => p.eve.gamma_bar = db_to_linear(x),
        SweepVariable::KappaM => p.main.kappa = x,
        SweepVariable::KappaE => p.eve.kappa = x,
        SweepVariable::MuM => p.main.mu = x,
        SweepVariable::MuE => p.eve.mu = x,
        SweepVariable::Rate => p.rate = x,
    }
    p.validate()?;
    Ok(p)
}

/// `steps` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                stop
            } else {
                start + (stop - start) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
struct SweepRow {
    x: f64,
    spsc: EvalResult,
    sop: EvalResult,
    lower: EvalResult,
    mc: Option<(McEstimate, McEstimate, McEstimate)>,
}

fn monotone_violation(rows: &[SweepRow], rising_snr: bool) -> Option<String> {
    for (i, w) in rows.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let checks = [
            ("spsc", a.spsc, b.spsc, rising_snr),
            ("sop_exact", a.sop, b.sop, !rising_snr),
            ("sop_lower", a.lower, b.lower, !rising_snr),
        ];
        for (name, ra, rb, up) in checks {
            let slack = ra.est_error + rb.est_error + 1e-12;
            let bad = if up { rb.value < ra.value - slack } else { rb.value > ra.value + slack };
            if bad {
                return Some(format!(
                    "{name} is not {} between rows {i} and {} ({} -> {})",
                    if up { "nondecreasing" } else { "nonincreasing" },
                    i + 1,
                    ra.value,
                    rb.value
                ));
            }
        }
    }
    None
}

pub fn sweep(a: &SweepArgs) -> Result<(), Failure> {
    if a.steps < 2 {
        return Err(Failure::usage("--steps must be at least 2"));
    }
    if !(a.start < a.stop) {
        return Err(Failure::usage("--start must be below --stop"));
    }
    let rising = match a.variable {
        SweepVariable::GammaBarMDb => Some(true),
        SweepVariable::GammaBarEDb => Some(false),
        _ => None,
    };
    if a.assert_monotone && rising.is_none() {
        return Err(Failure::usage(
            "--assert-monotone needs an average-SNR sweep variable (gamma_bar_m_db or gamma_bar_e_db)",
        ));
    }
    if let Some(n) = a.with_mc {
        if n < crate::montecarlo::MIN_DRAWS {
            return Err(Failure::usage(format!(
                "--with-mc needs at least {} draws",
                crate::montecarlo::MIN_DRAWS
            )));
        }
    }
    let base = resolve_pair(&a.channel, Some(&a.rate))?;
    let grid = linspace(a.start, a.stop, a.steps);
    let ctl = SeriesControl::default();
    let qc = QuadControl::default();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&x| -> crate::Result<SweepRow> {
            let p = apply(&base, a.variable, x)?;
            let mc = match a.with_mc {
                Some(n) => {
                    let c = mc_counts(&p, n, a.seed)?;
                    Some((c.spsc(a.seed), c.sop(a.seed), c.sop_lower(a.seed)))
                }
                None => None,
            };
            Ok(SweepRow {
                x,
                spsc: spsc_auto(&p)?,
                sop: sop_exact(&p, &qc)?,
                lower: sop_lower(&p, &ctl)?,
                mc,
            })
        })
        .collect::<crate::Result<_>>()?;
    if a.assert_monotone {
        if let Some(msg) = monotone_violation(&rows, rising.unwrap_or(true)) {
            return Err(Failure::validation(msg));
        }
    }
    let var = variable_name(a.variable);
    let text = match a.format {
        Format::Csv => {
            let mut header = vec![
                var,
                "spsc",
                "spsc_method",
                "spsc_err",
                "sop_exact",
                "sop_exact_err",
                "sop_lower",
                "sop_lower_err",
            ];
            if a.with_mc.is_some() {
                header.extend(["mc_spsc", "mc_sop_exact", "mc_sop_lower", "mc_std_error_max", "mc_n"]);
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        num(r.x),
                        num(r.spsc.value),
                        r.spsc.method.to_string(),
                        num(r.spsc.est_error),
                        num(r.sop.value),
                        num(r.sop.est_error),
                        num(r.lower.value),
                        num(r.lower.est_error),
                    ];
                    if let Some((s, o, l)) = r.mc {
                        let se = s.std_error.max(o.std_error).max(l.std_error);
                        v.extend([
                            num(s.estimate),
                            num(o.estimate),
                            num(l.estimate),
                            num(se),
                            s.n.to_string(),
                        ]);
                    }
                    v
                })
                .collect();
            csv_table(&header, &body)?
        }
        Format::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        var: r.x,
                        "spsc": r.spsc,
                        "sop_exact": r.sop,
                        "sop_lower": r.lower,
                    });
                    if let Some((s, o, l)) = r.mc {
                        v["mc"] = json!({"spsc": s, "sop_exact": o, "sop_lower": l});
                    }
                    v
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "variable": var,
                "main": channel_json(&base.main),
                "eve": channel_json(&base.eve),
                "rate_nats": base.rate,
                "rows": body,
            });
            format!("{doc}\n")
        }
    };
    emit(&text, a.output.as_deref())
}

pub fn validate(a: &ValidateArgs) -> Result<(), Failure> {
    let grid = match a.grid {
        GridSize::Small => small_grid(),
        GridSize::Full => full_grid(),
    };
    let perturb = if a.self_test_break { 1e-3 } else { 0.0 };
    let report = run_validation(&grid, a.mc_n, a.seed, &Tolerances::default(), perturb)?;
    let mut doc = serde_json::to_value(&report).map_err(|e| Failure::usage(e.to_string()))?;
    doc["schema"] = json!(SCHEMA_VERSION);
    doc["grid"] = json!(match a.grid {
        GridSize::Small => "small",
        GridSize::Full => "full",
    });
    doc["self_test_break"] = json!(a.self_test_break);
    emit(&format!("{doc}\n"), None)?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(Failure::validation(format!("checks out of tolerance: {}", failed.join(", "))))
    }
}

pub fn fit(a: &FitArgs) -> Result<(), Failure> {
    let kind = match a.input_kind {
        InputKindArg::Envelope => InputKind::Envelope,
        InputKindArg::Power => InputKind::Power,
    };
    let raw = read_trace(&a.input, kind)
        .map_err(|e| Failure::usage(format!("{}: {e}", a.input.display())))?;
    let trace = if a.window == 0 {
        raw
    } else {
        local_mean_normalize(&raw, a.window)?
    };
    let opts = FitOptions {
        bin_width: a.bin_width,
        ..FitOptions::default()
    };
    let f = fit_kappa_mu(&trace, &opts)?;
    if let Some(path) = &a.emit_pdf_grid {
        let rows: Vec<Vec<String>> = pdf_grid(&trace, &f, a.bin_width)?
            .into_iter()
            .map(|(r, emp, fit)| vec![num(r), num(emp), num(fit)])
            .collect();
        let text = csv_table(&["envelope", "empirical_density", "fitted_density"], &rows)?;
        emit(&text, Some(path))?;
    }
    let text = match a.format {
        Format::Json => format!(
            "{}\n",
            json!({
                "schema": SCHEMA_VERSION,
                "kappa_hat": f.kappa_hat,
                "mu_hat": f.mu_hat,
                "r_hat": f.r_hat,
                "residual": f.residual,
                "iterations": f.iterations,
                "start_index": f.start_index,
                "bins": f.bins,
                "samples": trace.len(),
                "window": a.window,
            })
        ),
        Format::Csv => csv_table(
            &["kappa_hat", "mu_hat", "r_hat", "residual", "iterations", "samples", "window"],
            &[vec![
                num(f.kappa_hat),
                num(f.mu_hat),
                num(f.r_hat),
                num(f.residual),
                f.iterations.to_string(),
                trace.len().to_string(),
                a.window.to_string(),
            ]],
        )?,
    };
    emit(&text, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = linspace(-10.0, 30.0, 41);
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], -10.0);
        assert_eq!(g[40], 30.0);
        assert!((g[10] - 0.0).abs() < 1e-12);
    }

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    }
}
