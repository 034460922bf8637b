//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! measured value, the pinned tolerance and the wall time against its
//! budget, and exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use debye_screen::debye::{
    compare_routes, debye_mass_sq, debye_mass_sq_integral, CROSS_CHECK_BETAS, CROSS_CHECK_MASSES,
};
use debye_screen::decay::{
    divergence_control, enumerate_connected_graphs, fit_decay, graph_bound, lemma2_stability, thermal_kernel_imag,
    verify_bound_ratio, FitModel, KernelChannel, KernelConfig, KernelWeight, Regime, SchedulePoint, SpacetimePoint,
};
use debye_screen::maxwell::{
    delta_family_limit, fitted_rate, log_grid, screening_profile, yukawa_reference, Mode, Propagator, SourceSpec,
};
use debye_screen::polarization::{b_hat, f_hat_spatial, f_hat_temporal, Channel};
use debye_screen::quadrature::{Quadrature, TestProfile};
use debye_screen::specfun::{bessel_k, ThermalParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;

fn unit(beta: f64, m: f64) -> ThermalParams {
    ThermalParams::unit_coupling(beta, m).expect("valid parameters")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn massless_debye() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in [0.5, 1.0, 2.0, 5.0] {
        let v = debye_mass_sq_integral(&unit(beta, 0.0), 1e-10).map_err(|e| e.to_string())?.m_d_sq;
        worst = worst.max(rel(v, 1.0 / (6.0 * beta * beta)));
    }
    Ok((worst < 1e-6, format!("max rel err {worst:.2e} (tol 1e-6)")))
}

fn cross_method() -> Outcome {
    let rows = compare_routes(&CROSS_CHECK_BETAS, &CROSS_CHECK_MASSES, 1.0, 1e-10).map_err(|e| e.to_string())?;
    let worst = rows.iter().map(|r| r.rel_gap).fold(0.0, f64::max);
    Ok((
        rows.len() == 24 && worst < 1e-6,
        format!("{} points, max rel gap {worst:.2e} (tol 1e-6)", rows.len()),
    ))
}

fn ground_state_limit() -> Outcome {
    let values = [5.0, 10.0, 20.0, 50.0]
        .iter()
        .map(|&b| debye_mass_sq(&unit(b, 1.0), 1e-13).map(|r| r.m_d_sq))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let monotone = values.windows(2).all(|w| w[1] < w[0]);
    Ok((
        values[3] < 1e-19 && monotone,
        format!("m_D^2(50, 1) = {:.3e} (< 1e-19), monotone {monotone}", values[3]),
    ))
}

fn static_identity() -> Outcome {
    let params = unit(1.0, 1.0);
    let m_d_sq = debye_mass_sq(&params, 1e-13).map_err(|e| e.to_string())?.m_d_sq;
    let probes = [0.2, 0.1, 0.05, 0.025];
    let gaps = probes
        .iter()
        .map(|&p| f_hat_temporal(p, &params, 1e-10).map(|f| rel(-f, m_d_sq)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let orders: Vec<f64> = gaps.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let min_order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    let last = gaps[3];
    Ok((
        min_order >= 1.0 && last < 1e-4,
        format!("final gap {last:.2e} (tol 1e-4), min observed order {min_order:.2} (>= 1)"),
    ))
}

fn channel_zeros() -> Outcome {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (beta, m) in [(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)] {
        let params = unit(beta, m);
        let f = f_hat_spatial(0.0, &params, 1e-10).map_err(|e| e.to_string())?;
        worst = worst.max(f.abs() * beta * beta);
        ok &= f.abs() < 1e-6 / (beta * beta);
        for channel in [Channel::Temporal, Channel::Spatial] {
            ok &= b_hat(channel, 0.0, &params, 1e-10).map_err(|e| e.to_string())? == 0.0;
        }
    }
    Ok((ok, format!("max |F_k(0)| beta^2 = {worst:.1e} (tol 1e-6), vacuum kernels exactly 0: {ok}")))
}

fn yukawa_screening() -> Outcome {
    let params = unit(1.0, 1.0);
    let m_d = debye_mass_sq(&params, 1e-13).map_err(|e| e.to_string())?.m_d_sq.sqrt();
    let grid = log_grid(0.1 / m_d, 15.0 / m_d, 32).map_err(|e| e.to_string())?;
    let source = SourceSpec::point(1.0).map_err(|e| e.to_string())?;
    let profile = screening_profile(&source, &params, Mode::ZerothOrder, &grid, 1e-9).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (&r, &a) in grid.iter().zip(&profile.values) {
        let y = yukawa_reference(1.0, 1.0, m_d * m_d, r).map_err(|e| e.to_string())?;
        worst = worst.max(rel(a, y));
    }
    let rate = fitted_rate(&grid, &profile.values, 5.0 / m_d, 15.0 / m_d).map_err(|e| e.to_string())?;
    let rate_err = rel(rate, m_d);
    Ok((
        worst < 1e-4 && rate_err < 1e-3,
        format!("max rel err {worst:.2e} (tol 1e-4), rate err {rate_err:.2e} (tol 1e-3)"),
    ))
}

fn delta_limit() -> Outcome {
    let params = unit(1.0, 1.0);
    let m_d_sq = debye_mass_sq(&params, 1e-13).map_err(|e| e.to_string())?.m_d_sq;
    let prop = Propagator::yukawa(1.0, m_d_sq).map_err(|e| e.to_string())?;
    let report = delta_family_limit(&[0.4, 0.2, 0.1, 0.05], 1.0, &prop, &[1.0 / m_d_sq.sqrt()], 1e-10)
        .map_err(|e| e.to_string())?;
    let gaps: Vec<String> = report.rows.iter().map(|r| format!("{:.1e}", r.rel_gap)).collect();
    let final_gap = report.max_final_gap();
    Ok((
        report.all_monotone() && final_gap < 1e-3,
        format!("gaps [{}], final {final_gap:.2e} (tol 1e-3)", gaps.join(", ")),
    ))
}

fn massive_decay() -> Outcome {
    let profile = TestProfile::gaussian(0.5, 1.0).map_err(|e| e.to_string())?;
    let mut worst = f64::INFINITY;
    let mut worst_at = String::new();
    for beta in [0.5, 1.0, 2.0] {
        for m in [0.5, 1.0, 2.0] {
            let params = unit(beta, m);
            for channel in KernelChannel::ALL {
                let samples = (0..17)
                    .map(|i| {
                        let z = (6.0 + 8.0 * i as f64 / 16.0) / m;
                        thermal_kernel_imag(beta / 2.0, z, channel, &profile, &params, 1e-10).map(|v| (z, v.abs()))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                let fit = fit_decay(&samples, FitModel::LogLinear).map_err(|e| e.to_string())?;
                let ratio = -fit.slope / m;
                if ratio < worst {
                    worst = ratio;
                    worst_at = format!("beta={beta} m={m} {}", channel.name());
                }
            }
        }
    }
    Ok((worst >= 0.95, format!("min rate/m {worst:.4} at {worst_at} (>= 0.95)")))
}

fn massless_decay() -> Outcome {
    let profile = TestProfile::gaussian(0.5, 1.0).map_err(|e| e.to_string())?;
    let mut worst = f64::NEG_INFINITY;
    let mut sup: f64 = 0.0;
    for beta in [0.5, 1.0, 2.0] {
        let schedule: Vec<SchedulePoint> = log_grid(2.0, 50.0, 16)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|z| SchedulePoint { u: beta / 2.0, z })
            .collect();
        for channel in [KernelChannel::TemporalOmega, KernelChannel::SpatialMomentum] {
            let cfg = KernelConfig {
                channel,
                weight: KernelWeight::Bare,
                profile,
                params: unit(beta, 0.0),
                tol: 1e-10,
            };
            let report = verify_bound_ratio(&cfg, Regime::ThermalSpatial, &schedule).map_err(|e| e.to_string())?;
            worst = worst.max(report.trend_slope);
            sup = sup.max(report.sup_ratio);
        }
    }
    Ok((
        worst <= 0.01 && sup.is_finite(),
        format!("max ratio trend {worst:.4} (<= 0.01), sup ratio {sup:.2}"),
    ))
}

/// Independent oracle: every edge subset of the complete graph, kept when a
/// depth-first search from vertex 0 reaches all vertices.
fn oracle_graph_sum(k: usize, factor: &dyn Fn(usize, usize) -> f64) -> (usize, f64) {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut count = 0;
    let mut sum = 0.0;
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            count += 1;
            sum += edges.iter().map(|&(a, b)| factor(a, b)).product::<f64>();
        }
    }
    (count, sum)
}

fn graph_machinery() -> Outcome {
    let expected = [(2, 1), (3, 4), (4, 38), (5, 728)];
    let mut ok = true;
    for (k, n) in expected {
        let g = enumerate_connected_graphs(k).map_err(|e| e.to_string())?;
        let (oracle_n, _) = oracle_graph_sum(k, &|_, _| 1.0);
        ok &= g.len() == n && oracle_n == n;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let k = 2 + trial % 4;
        let mass = if trial % 3 == 0 { 0.0 } else { rng.random_range(0.2..2.0) };
        let points: Vec<SpacetimePoint> = (1..k)
            .map(|_| SpacetimePoint::spatial([rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]))
            .collect();
        let graphs = enumerate_connected_graphs(k).map_err(|e| e.to_string())?;
        let got = graph_bound(&points, mass, &graphs, Regime::ThermalSpatial).map_err(|e| e.to_string())?;
        let pos = |i: usize| if i == 0 { [0.0; 3] } else { points[i - 1].z };
        let factor = |a: usize, b: usize| {
            let (p, q) = (pos(a), pos(b));
            let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
            if mass > 0.0 {
                (-mass * d).exp()
            } else {
                (1.0 + d).powi(-3)
            }
        };
        let (_, want) = oracle_graph_sum(k, &factor);
        worst = worst.max(rel(got, want));
    }
    Ok((ok && worst < 1e-12, format!("counts match {ok}, max rel err on 20 point sets {worst:.1e} (tol 1e-12)")))
}

fn lemma2() -> Outcome {
    let st = lemma2_stability(1_000_000, 4_000_000, 42).map_err(|e| e.to_string())?;
    let ladder = divergence_control(&[10.0, 100.0, 1000.0], 100_000, 42).map_err(|e| e.to_string())?;
    Ok((
        st.separation <= 3.0 && ladder.grows(),
        format!(
            "{:.4} vs {:.4}, separation {:.2} combined s.e. (<= 3), control grows {}",
            st.small.estimate.value,
            st.large.estimate.value,
            st.separation,
            ladder.grows()
        ),
    ))
}

/// `K_2(z) = int_1^inf e^{-z x} / sqrt(x^2 - 1) dx + 2 int_1^inf sqrt(x^2 - 1) e^{-z x} dx`,
/// both evaluated with `x = cosh t`.
fn bessel_k2_oracle(z: f64) -> f64 {
    let q = Quadrature::relative(1e-14);
    // Past t = 40 both integrands are far below double precision.
    let damp = |t: f64| if t > 40.0 { 0.0 } else { (-z * (t.cosh() - 1.0)).exp() };
    let first = q.semi_infinite(damp, 0.0, 1.0).unwrap().value;
    let second = q
        .semi_infinite(|t: f64| if t > 40.0 { 0.0 } else { t.sinh().powi(2) * damp(t) }, 0.0, 1.0)
        .unwrap()
        .value;
    (first + 2.0 * second) * (-z).exp()
}

fn special_functions() -> Outcome {
    let mut worst: f64 = 0.0;
    for z in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let k2 = bessel_k(2, z).map_err(|e| e.to_string())?;
        worst = worst.max(rel(k2, bessel_k2_oracle(z)));
    }
    Ok((worst < 1e-8, format!("max rel err {worst:.1e} (tol 1e-8)")))
}

fn determinism_and_interface() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_debye-screen");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "params.beta=1\nparams.mass=1\ngrid.p_points=5\ndecay.z_points=9\n").map_err(|e| e.to_string())?;
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "params.beta=oops\n").map_err(|e| e.to_string())?;
    let infrared = dir.path().join("ir.cfg");
    std::fs::write(&infrared, "params.mass=0\npolarization.channel=spatial\ngrid.p_points=3\n").map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<i32, String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        Ok(out.status.code().unwrap_or(-1))
    };
    let cfg_s = cfg.to_str().unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let (csv_s, json_s) = (csv.to_str().unwrap(), json.to_str().unwrap());
    let mut problems = Vec::new();
    for sub in ["debye", "screening", "polarization", "decay", "limits"] {
        let mut artifacts = Vec::new();
        for _ in 0..2 {
            let code = run(&[sub, "--config", cfg_s, "--seed", "7", "--out-csv", csv_s, "--out-json", json_s, "--quiet"])?;
            if code != 0 {
                problems.push(format!("{sub}: exit {code}"));
            }
            artifacts.push((std::fs::read(&csv).unwrap_or_default(), std::fs::read(&json).unwrap_or_default()));
        }
        if artifacts[0] != artifacts[1] || artifacts[0].0.is_empty() {
            problems.push(format!("{sub}: artifacts differ"));
        }
        let code = run(&[sub, "--config", bad.to_str().unwrap(), "--quiet"])?;
        if code != 2 {
            problems.push(format!("{sub}: bad config gave {code}"));
        }
    }
    let code = run(&["polarization", "--config", infrared.to_str().unwrap(), "--quiet"])?;
    if code != 1 {
        problems.push(format!("infrared divergence gave {code}"));
    }
    Ok((
        problems.is_empty(),
        if problems.is_empty() {
            "byte-identical artifacts, exit 0/1/2 for every subcommand".to_string()
        } else {
            problems.join("; ")
        },
    ))
}

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("massless Debye mass", 1, massless_debye),
        ("cross-method Debye mass", 10, cross_method),
        ("ground-state limit", 1, ground_state_limit),
        ("static kernel identity", 60, static_identity),
        ("channel zeros", 10, channel_zeros),
        ("Yukawa screening", 30, yukawa_screening),
        ("delta-family limit", 60, delta_limit),
        ("massive decay bound", 120, massive_decay),
        ("massless decay bound", 120, massless_decay),
        ("graph machinery", 5, graph_machinery),
        ("convergence integral", 60, lemma2),
        ("special-function base", 5, special_functions),
        ("determinism and interface", 10, determinism_and_interface),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail}; {:.2} s (budget {budget} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
