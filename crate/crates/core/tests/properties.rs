use proptest::prelude::*;

use debye_screen::cli::{format_number, RunConfig, Subcommand};
use debye_screen::debye::{debye_mass_sq, debye_mass_sq_integral, debye_mass_sq_series};
use debye_screen::decay::{enumerate_connected_graphs, fit_decay, graph_bound, FitModel, Regime, SpacetimePoint};
use debye_screen::maxwell::{solve, Propagator, SourceSpec};
use debye_screen::polarization::divided_difference;
use debye_screen::quadrature::Quadrature;
use debye_screen::specfun::{bessel_k, fermi_factor, Beta, ThermalParams};

fn m_d_sq(beta: f64, mass: f64) -> f64 {
    debye_mass_sq(&ThermalParams::unit_coupling(beta, mass).unwrap(), 1e-12).unwrap().m_d_sq
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn debye_mass_positive_and_decreasing(beta in 0.1f64..20.0, mass in 0.0f64..3.0, step in 1.05f64..2.0) {
        let v = m_d_sq(beta, mass);
        prop_assert!(v > 0.0);
        prop_assert!(m_d_sq(beta * step, mass) < v);
        prop_assert!(m_d_sq(beta, mass * step + 1e-3) < v);
    }

    #[test]
    fn debye_mass_depends_on_beta_times_mass(beta in 0.1f64..10.0, x in 0.0f64..10.0) {
        let scaled = m_d_sq(beta, x / beta) * beta * beta;
        let unit = m_d_sq(1.0, x);
        prop_assert!(((scaled - unit) / unit).abs() < 1e-9, "{scaled} vs {unit}");
    }

    #[test]
    fn debye_routes_agree(beta in 0.2f64..10.0, mass in 0.05f64..3.0) {
        let p = ThermalParams::unit_coupling(beta, mass).unwrap();
        let s = debye_mass_sq_series(&p, 1e-13).unwrap().m_d_sq;
        let i = debye_mass_sq_integral(&p, 1e-12).unwrap().m_d_sq;
        prop_assert!(((s - i) / i).abs() < 1e-8, "beta {beta} mass {mass}: {s} vs {i}");
    }

    #[test]
    fn debye_mass_scales_with_charge_squared(beta in 0.2f64..5.0, mass in 0.0f64..2.0, e in 0.1f64..3.0) {
        let one = m_d_sq(beta, mass);
        let p = ThermalParams::new(beta, mass, e, 1.0, 0.0).unwrap();
        let v = debye_mass_sq(&p, 1e-12).unwrap().m_d_sq;
        prop_assert!((v / (e * e * one) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fermi_factor_in_unit_interval_and_decreasing(beta in 0.01f64..100.0, w in 0.0f64..50.0, dw in 0.01f64..5.0) {
        let b = Beta::new(beta).unwrap();
        let n = fermi_factor(b, w).unwrap();
        prop_assert!((0.0..=0.5).contains(&n));
        prop_assert!(fermi_factor(b, w + dw).unwrap() <= n);
    }

    #[test]
    fn bessel_recurrence(z in 0.05f64..200.0) {
        let k0 = bessel_k(0, z).unwrap();
        let k1 = bessel_k(1, z).unwrap();
        let k2 = bessel_k(2, z).unwrap();
        prop_assume!(k2 > 1e-290);
        prop_assert!(((k0 + 2.0 / z * k1) / k2 - 1.0).abs() < 1e-12);
        prop_assert!(k0 < k1 && k1 < k2);
    }

    #[test]
    fn divided_difference_is_symmetric(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let h = |x: f64| x * x * x;
        let dh = |x: f64| 3.0 * x * x;
        let ab = divided_difference(h, dh, a, b);
        let ba = divided_difference(h, dh, b, a);
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
        let exact = a * a + a * b + b * b;
        prop_assert!((ab - exact).abs() <= 1e-5 * (1.0 + exact.abs()));
    }

    #[test]
    fn quadrature_integrates_polynomials(a in -3.0f64..0.0, len in 0.1f64..5.0, c in -2.0f64..2.0) {
        let b = a + len;
        let r = Quadrature::relative(1e-12).interval(|x| c * x.powi(5) + x * x - 1.0, a, b).unwrap();
        let anti = |x: f64| c * x.powi(6) / 6.0 + x.powi(3) / 3.0 - x;
        let exact = anti(b) - anti(a);
        prop_assert!((r.value - exact).abs() <= 1e-11 * (1.0 + exact.abs()));
    }

    #[test]
    fn fit_recovers_exponential_rate(rate in 0.1f64..5.0, amp in 1e-3f64..1e3, n in 8usize..40) {
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let r = 1.0 + i as f64 * 0.25;
                (r, amp * (-rate * r).exp())
            })
            .collect();
        let fit = fit_decay(&samples, FitModel::LogLinear).unwrap();
        prop_assert!((fit.slope + rate).abs() < 1e-9);
        prop_assert!(fit.max_residual < 1e-9);
    }

    #[test]
    fn graph_bound_ignores_point_order(
        coords in proptest::collection::vec(-4.0f64..4.0, 9),
        mass in 0.0f64..2.0,
        rot in 0usize..3,
    ) {
        let graphs = enumerate_connected_graphs(4).unwrap();
        let pts: Vec<SpacetimePoint> = coords
            .chunks(3)
            .map(|c| SpacetimePoint::spatial([c[0], c[1], c[2]]))
            .collect();
        let mut moved = pts.clone();
        moved.rotate_left(rot);
        moved.swap(0, 1);
        let a = graph_bound(&pts, mass, &graphs, Regime::ThermalSpatial).unwrap();
        let b = graph_bound(&moved, mass, &graphs, Regime::ThermalSpatial).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn format_number_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let full: f64 = format_number(x, 17).parse().unwrap();
        prop_assert_eq!(full, x);
        let short: f64 = format_number(x, 6).parse().unwrap();
        prop_assert!((short - x).abs() <= 5e-6 * x.abs());
    }

    #[test]
    fn config_text_round_trips(
        beta in 0.01f64..100.0,
        mass in 0.0f64..10.0,
        seed in any::<u64>(),
        precision in 6usize..=17,
        points in 2usize..200,
    ) {
        let text = format!(
            "params.beta={beta}\nparams.mass={mass}\nseed={seed}\noutput.precision={precision}\ngrid.p_points={points}\n"
        );
        let first = RunConfig::parse_for(Subcommand::Polarization, &text).unwrap();
        let emitted = first.to_text();
        let second = RunConfig::parse_for(Subcommand::Polarization, &emitted).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(second.to_text(), emitted);
        prop_assert_eq!(first.hash(), second.hash());
    }
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn potential_is_linear_in_charge(q in 0.1f64..5.0, sigma in 0.05f64..0.5, lambda in 0.2f64..2.0) {
        let prop = Propagator::yukawa(lambda, 1.0).unwrap();
        let r = [0.5, 1.0, 2.0, 4.0];
        let unit = solve(&SourceSpec::gaussian(sigma, 1.0).unwrap(), &prop, &r, 1e-9).unwrap();
        let scaled = solve(&SourceSpec::gaussian(sigma, q).unwrap(), &prop, &r, 1e-9).unwrap();
        for (u, s) in unit.iter().zip(&scaled) {
            prop_assert!((s / (q * u) - 1.0).abs() < 1e-6);
            prop_assert!(*u > 0.0);
        }
    }
}
