//! Subcommand bodies. Each returns a [`Report`] or a computation error.

use serde_json::{json, Map, Value};

use super::config::RunConfig;
use super::output::{number, Check, Report, Table};
use crate::debye::{
    compare_routes, debye_mass_sq, debye_mass_sq_integral, debye_mass_sq_massless, debye_mass_sq_series,
    debye_mass_sq_si, UnitSystem,
};
use crate::decay::{
    divergence_control, fit_decay, lemma2_stability, verify_bound_ratio, BoundKind, FitModel, KernelConfig,
    Regime, SchedulePoint,
};
use crate::maxwell::{
    delta_family_limit, fitted_rate, log_grid, screening_propagator, solve, yukawa_reference, Mode, SourceFamily,
};
use crate::polarization::{b_hat, f_hat_spatial, f_hat_temporal, scan_kernel, Channel};
use crate::quadrature::TestProfile;
use crate::specfun::{Beta, ThermalParams};

/// Computation failure with the module it came from; exit status 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandError {
    pub module: &'static str,
    pub message: String,
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.module, self.message)
    }
}

impl std::error::Error for CommandError {}

fn ctx<E: std::fmt::Display>(module: &'static str) -> impl Fn(E) -> CommandError {
    move |e| CommandError {
        module,
        message: e.to_string(),
    }
}

struct Results {
    map: Map<String, Value>,
    precision: usize,
}

impl Results {
    fn new(config: &RunConfig) -> Self {
        Self {
            map: Map::new(),
            precision: config.output.precision,
        }
    }

    fn num(&mut self, key: &str, v: f64) {
        self.map.insert(key.into(), number(v, self.precision));
    }

    fn set(&mut self, key: &str, v: Value) {
        self.map.insert(key.into(), v);
    }
}

fn is_natural(units: &UnitSystem) -> bool {
    *units == UnitSystem::natural()
}

pub fn run_debye(config: &RunConfig) -> Result<Report, CommandError> {
    let params = &config.params;
    let tol = config.tol.quadrature;
    let e = params.charge_e();
    let mut res = Results::new(config);
    let mut checks = Vec::new();

    let canonical = debye_mass_sq(params, tol).map_err(ctx("debye"))?;
    res.num("beta", params.beta().value());
    res.num("mass", params.mass());
    res.num("charge_e", e);
    res.num("m_d_sq", canonical.m_d_sq);
    res.num("lambda_d", canonical.lambda_d);
    res.set("method", json!(canonical.method.name()));

    match params.beta() {
        Beta::Ground => {
            checks.push(Check::relative("ground_state_vanishes", canonical.m_d_sq, 0.0, 0.0));
        }
        Beta::Finite(b) => {
            let integral = debye_mass_sq_integral(params, tol).map_err(ctx("debye"))?.m_d_sq;
            res.num("integral", integral);
            if params.mass() == 0.0 {
                let closed = debye_mass_sq_massless(params).m_d_sq;
                res.num("massless", closed);
                checks.push(Check::relative("massless_closed_form", integral, e * e / (6.0 * b * b), 1e-6));
            } else {
                let series = debye_mass_sq_series(params, config.tol.series).map_err(ctx("debye"))?.m_d_sq;
                let gap = ((series - integral) / series).abs();
                res.num("series", series);
                res.num("rel_gap", gap);
                checks.push(Check::relative("cross_method", integral, series, 1e-6));
                if !is_natural(&config.units) {
                    let si = debye_mass_sq_si(params, &config.units, config.tol.series).map_err(ctx("debye"))?;
                    res.num("m_d_sq_units", si.m_d_sq);
                }
            }
        }
    }

    let table = if config.grid.betas.is_empty() {
        let mut t = Table::new(&["beta", "mass", "m_d_sq", "lambda_d"]);
        t.push(vec![params.beta().value(), params.mass(), canonical.m_d_sq, canonical.lambda_d]);
        t
    } else {
        let rows = compare_routes(&config.grid.betas, &config.grid.masses, e, config.tol.series).map_err(ctx("debye"))?;
        let mut t = Table::new(&["beta", "mass", "series", "integral", "rel_gap"]);
        let worst = rows.iter().map(|r| r.rel_gap).fold(0.0, f64::max);
        for r in rows {
            t.push(vec![r.beta, r.mass, r.series, r.integral, r.rel_gap]);
        }
        res.num("scan_max_rel_gap", worst);
        checks.push(Check::at_most("scan_cross_method", worst, 1e-6, 0.0));
        t
    };
    let units = table.columns.iter().map(|c| match c.as_str() {
        "beta" | "lambda_d" => "1/energy",
        "mass" => "energy",
        "rel_gap" => "1",
        _ => "energy^2",
    });
    Ok(Report {
        units: units.map(String::from).collect(),
        results: res.map,
        checks,
        table,
    })
}

pub fn run_polarization(config: &RunConfig) -> Result<Report, CommandError> {
    let params = &config.params;
    let tol = config.tol.quadrature;
    let channel = config.polarization_channel;
    let g = &config.grid;
    let grid: Vec<f64> = (0..g.p_points)
        .map(|i| g.p_min + (g.p_max - g.p_min) * i as f64 / (g.p_points - 1) as f64)
        .collect();
    let scan = scan_kernel(channel, &grid, params, tol).map_err(ctx("polarization"))?;
    let m_d_sq = debye_mass_sq(params, tol).map_err(ctx("debye"))?.m_d_sq;
    let e = params.charge_e();

    let mut res = Results::new(config);
    let mut checks = Vec::new();
    res.set("channel", json!(channel.name()));
    res.num("m_d_sq", m_d_sq);
    res.set("points", json!(scan.points.len()));

    match (channel, params.beta()) {
        (_, Beta::Ground) => {
            let worst = scan.points.iter().map(|p| p.f_hat.abs()).fold(0.0, f64::max);
            res.num("max_abs_f_hat", worst);
            checks.push(Check::relative("thermal_kernel_vanishes", worst, 0.0, 0.0));
        }
        (Channel::Temporal, Beta::Finite(b)) => {
            // Approach zero momentum on the thermal scale; the gap closes
            // quadratically in the probe momentum.
            let probe = 0.025 / b;
            let f = f_hat_temporal(probe, params, tol).map_err(ctx("polarization"))?;
            let gap = ((f + m_d_sq) / m_d_sq).abs();
            res.num("static_probe", probe);
            res.num("static_f_hat", f);
            res.num("identity_gap", gap);
            checks.push(Check::relative("static_identity", -f, m_d_sq, 1e-4));
        }
        (Channel::Spatial, Beta::Finite(b)) => {
            let f0 = f_hat_spatial(0.0, params, tol).map_err(ctx("polarization"))?;
            let b0 = b_hat(Channel::Spatial, 0.0, params, tol).map_err(ctx("polarization"))?;
            res.num("f_hat_at_zero", f0);
            res.num("b_hat_at_zero", b0);
            checks.push(Check::relative("spatial_zero", f0, 0.0, 1e-6 * e * e / (b * b)));
            checks.push(Check::relative("vacuum_zero", b0, 0.0, 0.0));
        }
    }

    let mut table = Table::new(&["p_tilde", "f_hat", "b_hat", "denominator"]);
    for p in &scan.points {
        table.push(vec![p.p_tilde, p.f_hat, p.b_hat, p.denominator]);
    }
    Ok(Report {
        units: ["energy", "energy^2", "energy^2", "energy^2"].map(String::from).to_vec(),
        results: res.map,
        checks,
        table,
    })
}

pub fn run_screening(config: &RunConfig) -> Result<Report, CommandError> {
    let params = &config.params;
    let tol = config.tol.quadrature;
    let source = config.source_spec();
    let mode = config.screening.mode;
    let q = source.charge_q();

    let propagator = screening_propagator(source.channel(), params, mode, tol).map_err(ctx("maxwell"))?;
    let mu_sq = propagator.static_mass_sq();
    let mu = mu_sq.sqrt();
    let length = if mu > 0.0 { 1.0 / mu } else { 1.0 };
    let grid = log_grid(config.grid.r_min * length, config.grid.r_max * length, config.grid.r_per_decade)
        .map_err(ctx("maxwell"))?;
    let values = solve(&source, &propagator, &grid, tol).map_err(ctx("maxwell"))?;

    let mut table = Table::new(&["r", "a", "yukawa", "rel_gap"]);
    let mut worst: f64 = 0.0;
    for (&r, &a) in grid.iter().zip(&values) {
        let y = yukawa_reference(q, 1.0, mu_sq, r).map_err(ctx("maxwell"))?;
        let gap = ((a - y) / y).abs();
        worst = worst.max(gap);
        table.push(vec![r, a, y, gap]);
    }
    let (fit_lo, fit_hi) = (config.tol.fit_r_min * length, config.tol.fit_r_max * length);
    let rate = fitted_rate(&grid, &values, fit_lo, fit_hi).map_err(ctx("maxwell"))?;

    let mut res = Results::new(config);
    let mut checks = Vec::new();
    res.set("mode", json!(mode.name()));
    res.set("channel", json!(source.channel().name()));
    res.num("static_mass_sq", mu_sq);
    res.num("screening_length", if mu > 0.0 { 1.0 / mu } else { f64::INFINITY });
    res.num("fitted_rate", rate);
    res.num("expected_rate", mu);
    res.num("fit_r_min", fit_lo);
    res.num("fit_r_max", fit_hi);
    res.num("max_yukawa_gap", worst);

    if mode == Mode::ZerothOrder {
        checks.push(Check::relative("fitted_rate", rate, mu, 1e-3));
        if source.family() == SourceFamily::Point {
            checks.push(Check::at_most("yukawa_profile", worst, 1e-4, 0.0));
        }
        if mu == 0.0 {
            let (r, a) = (*grid.last().expect("non-empty grid"), *values.last().expect("non-empty"));
            let charge = 4.0 * std::f64::consts::PI * r * a;
            res.num("far_field_charge", charge);
            checks.push(Check::relative("coulomb_far_field", charge, q, 1e-4));
        }
    }

    if !config.screening.delta_ladder.is_empty() {
        let probes: Vec<f64> = config.screening.probes.iter().map(|p| p * length).collect();
        let report = delta_family_limit(&config.screening.delta_ladder, q, &propagator, &probes, tol)
            .map_err(ctx("maxwell"))?;
        let p = config.output.precision;
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|row| {
                let monotone = report
                    .probes
                    .iter()
                    .find(|s| s.r == row.r)
                    .map(|s| s.monotone)
                    .unwrap_or(false);
                json!({
                    "epsilon": number(row.epsilon, p),
                    "r": number(row.r, p),
                    "value": number(row.value, p),
                    "reference": number(row.reference, p),
                    "rel_gap": number(row.rel_gap, p),
                    "monotone": monotone,
                })
            })
            .collect();
        res.set(
            "delta_limit",
            json!({
                "rows": rows,
                "all_monotone": report.all_monotone(),
                "max_final_gap": number(report.max_final_gap(), p),
            }),
        );
        checks.push(Check::flag("delta_limit_monotone", report.all_monotone()));
    }

    Ok(Report {
        units: ["1/energy", "energy", "energy", "1"].map(String::from).to_vec(),
        results: res.map,
        checks,
        table,
    })
}

fn decay_schedule(config: &RunConfig) -> Vec<SchedulePoint> {
    let d = &config.decay;
    let m = config.params.mass();
    let n = d.z_points;
    let (lo, hi) = if m > 0.0 {
        (
            d.z_min.unwrap_or(config.tol.decay_window_min / m),
            d.z_max.unwrap_or(config.tol.decay_window_max / m),
        )
    } else {
        (d.z_min.unwrap_or(2.0), d.z_max.unwrap_or(50.0))
    };
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            // Linear steps for exponential decay, log steps for power laws.
            let z = if m > 0.0 { lo + (hi - lo) * t } else { lo * (hi / lo).powf(t) };
            SchedulePoint { u: d.u, z }
        })
        .collect()
}

pub fn run_decay(config: &RunConfig) -> Result<Report, CommandError> {
    let d = &config.decay;
    let params = &config.params;
    let m = params.mass();
    let profile = TestProfile::gaussian(d.profile_width, 1.0).map_err(ctx("decay"))?;
    let kernel = KernelConfig {
        channel: d.channel,
        weight: d.weight,
        profile,
        params: *params,
        tol: config.tol.quadrature,
    };
    let schedule = decay_schedule(config);
    let report = verify_bound_ratio(&kernel, d.regime, &schedule).map_err(ctx("decay"))?;

    let mut res = Results::new(config);
    let mut checks = Vec::new();
    res.set("channel", json!(d.channel.name()));
    res.set("weight", json!(d.weight.name()));
    res.set("regime", json!(d.regime.name()));
    res.set(
        "bound_kind",
        json!(match report.kind {
            BoundKind::Exponential => "exponential",
            BoundKind::Polynomial => "polynomial",
        }),
    );
    res.num("sup_ratio", report.sup_ratio);
    res.num("trend_slope", report.trend_slope);
    res.set("excluded", json!(report.excluded.len()));

    match report.kind {
        BoundKind::Exponential => {
            let samples: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.r, r.kernel.abs())).collect();
            let fit = fit_decay(&samples, FitModel::LogLinear).map_err(ctx("decay"))?;
            res.num("slope", fit.slope);
            res.num("fit_max_residual", fit.max_residual);
            checks.push(Check::at_most("exponential_rate", fit.slope, -0.95 * m, 0.0));
        }
        BoundKind::Polynomial => {
            checks.push(Check::at_most("polynomial_envelope_trend", report.trend_slope, 0.01, 0.0));
        }
    }

    if d.lemma2_small > 0 {
        let st = lemma2_stability(d.lemma2_small, d.lemma2_large, config.seed).map_err(ctx("decay"))?;
        let p = config.output.precision;
        let run = |r: &crate::quadrature::MonteCarloResult| {
            json!({
                "value": number(r.estimate.value, p),
                "std_error": number(r.std_error, p),
                "samples": r.samples,
            })
        };
        res.set(
            "lemma2",
            json!({
                "small": run(&st.small),
                "large": run(&st.large),
                "separation": number(st.separation, p),
                "truncation_bias_bound": number(st.truncation_bias_bound, p),
                "agree": st.agree(),
            }),
        );
        checks.push(Check::at_most("lemma2_agreement", st.separation, 3.0, 0.0));
    }
    if !d.divergence_radii.is_empty() {
        let n = if d.lemma2_small > 0 { d.lemma2_small } else { 100_000 };
        let ladder = divergence_control(&d.divergence_radii, n, config.seed).map_err(ctx("decay"))?;
        let p = config.output.precision;
        res.set(
            "divergence_control",
            json!({
                "radii": ladder.radii.iter().map(|v| number(*v, p)).collect::<Vec<_>>(),
                "estimates": ladder.estimates.iter().map(|v| number(v.estimate.value, p)).collect::<Vec<_>>(),
                "exact": ladder.exact.iter().map(|v| number(*v, p)).collect::<Vec<_>>(),
                "grows": ladder.grows(),
            }),
        );
        checks.push(Check::flag("divergence_control_grows", ladder.grows()));
    }

    let mut table = Table::new(&["r", "u", "z", "kernel", "bound", "ratio"]);
    for r in &report.rows {
        table.push(vec![r.r, r.u, r.z, r.kernel, r.bound, r.ratio]);
    }
    if d.regime == Regime::GroundSpacetime && !params.beta().is_ground() {
        res.set("note", json!("ground_spacetime distances used at finite beta"));
    }
    Ok(Report {
        units: ["1/energy", "1/energy", "1/energy", "energy^3", "1", "1"].map(String::from).to_vec(),
        results: res.map,
        checks,
        table,
    })
}

/// Zero-temperature and zero-mass limits as one suite.
pub fn run_limits(config: &RunConfig) -> Result<Report, CommandError> {
    let e = config.params.charge_e();
    let tol = config.tol.quadrature;
    let params = |beta: f64, m: f64| ThermalParams::new(beta, m, e, 1.0, 0.0).map_err(ctx("specfun"));
    let mut checks = Vec::new();
    let mut table = Table::new(&["beta", "mass", "m_d_sq", "reference"]);
    let mut res = Results::new(config);

    for beta in [0.5, 1.0, 2.0, 5.0] {
        let v = debye_mass_sq_integral(&params(beta, 0.0)?, tol).map_err(ctx("debye"))?.m_d_sq;
        let want = e * e / (6.0 * beta * beta);
        checks.push(Check::relative(&format!("massless_beta_{beta}"), v, want, 1e-6));
        table.push(vec![beta, 0.0, v, want]);
    }

    let beta = config.params.beta().finite().unwrap_or(1.0);
    let light = 1e-3 / beta;
    let v = debye_mass_sq(&params(beta, light)?, tol).map_err(ctx("debye"))?.m_d_sq;
    let want = e * e / (6.0 * beta * beta);
    checks.push(Check::relative("small_mass_continuity", v, want, 1e-5));
    table.push(vec![beta, light, v, want]);

    let m = if config.params.mass() > 0.0 { config.params.mass() } else { 1.0 };
    let mut ladder = Vec::new();
    for beta in [5.0, 10.0, 20.0, 50.0] {
        let v = debye_mass_sq(&params(beta, m)?, config.tol.series).map_err(ctx("debye"))?.m_d_sq;
        ladder.push(v);
        table.push(vec![beta, m, v, 0.0]);
    }
    let monotone = ladder.windows(2).all(|w| w[1] < w[0]);
    checks.push(Check::at_most("ground_state_beta_50", ladder[3], 1e-19, 0.0));
    checks.push(Check::flag("ground_state_monotone", monotone));

    let ground = params(f64::INFINITY, m)?;
    let v = debye_mass_sq(&ground, tol).map_err(ctx("debye"))?.m_d_sq;
    let f = f_hat_temporal(1.0, &ground, tol).map_err(ctx("polarization"))?;
    checks.push(Check::relative("ground_state_debye_mass", v, 0.0, 0.0));
    checks.push(Check::relative("ground_state_kernel", f, 0.0, 0.0));
    table.push(vec![f64::INFINITY, m, v, 0.0]);

    res.num("ground_ladder_mass", m);
    res.set("passed", json!(checks.iter().filter(|c| c.pass).count()));
    res.set("total", json!(checks.len()));
    Ok(Report {
        units: ["1/energy", "energy", "energy^2", "energy^2"].map(String::from).to_vec(),
        results: res.map,
        checks,
        table,
    })
}
