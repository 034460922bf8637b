//! Square Debye mass and Debye screening length.
//!
//! Three routes are provided: the alternating Bessel series
//! `m_D^2 = (e^2 m^2 / pi^2) sum_n (-1)^n K_2((n+1) beta m)`, the momentum
//! integral of minus the derivative of the Fermi factor from which that
//! series is obtained, and the massless closed form `e^2 / (6 beta^2)`.
//! All three share one normalization, so they agree to quadrature accuracy.
//!
//! Tolerances passed to the routes here are relative.

use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

use crate::quadrature::{Quadrature, QuadratureError, QuadratureResult};
use crate::specfun::{
    alternating_sum, bessel_k_scaled, fermi_neg_derivative, Beta, SeriesResult, SpecFunError, ThermalParams,
};

const MAX_SERIES_TERMS: usize = 50_000_000;

/// Below this value of `beta * m` the integral route is canonical.
pub const SERIES_CROSSOVER: f64 = 0.5;

/// Inverse temperatures and masses of the standard cross-method grid.
pub const CROSS_CHECK_BETAS: [f64; 6] = [0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const CROSS_CHECK_MASSES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DebyeError {
    #[error("series route needs m > 0; use the massless or integral route for m = 0")]
    UseMasslessRoute,
    #[error("invalid unit system: {0}")]
    InvalidUnits(String),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("Debye integral: {0}")]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DebyeMethod {
    Series,
    Integral,
    Massless,
}

impl DebyeMethod {
    pub fn name(self) -> &'static str {
        match self {
            DebyeMethod::Series => "series",
            DebyeMethod::Integral => "integral",
            DebyeMethod::Massless => "massless",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diagnostics {
    Series(SeriesResult),
    Quadrature(QuadratureResult),
    /// Closed form or exact limit, no truncation.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DebyeResult {
    pub m_d_sq: f64,
    pub lambda_d: f64,
    pub method: DebyeMethod,
    pub diagnostics: Diagnostics,
}

impl DebyeResult {
    fn new(m_d_sq: f64, method: DebyeMethod, diagnostics: Diagnostics) -> Self {
        Self {
            m_d_sq,
            lambda_d: screening_length(m_d_sq),
            method,
            diagnostics,
        }
    }

    pub fn debye_mass(&self) -> f64 {
        self.m_d_sq.sqrt()
    }
}

/// `1/sqrt(m_d_sq)`, `+inf` when the square mass vanishes.
pub fn screening_length(m_d_sq: f64) -> f64 {
    if m_d_sq > 0.0 {
        1.0 / m_d_sq.sqrt()
    } else {
        f64::INFINITY
    }
}

/// `hbar`, `c` and `epsilon_0`; all one in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
    c: f64,
    epsilon0: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, c: f64, epsilon0: f64) -> Result<Self, DebyeError> {
        for (name, v) in [("hbar", hbar), ("c", c), ("epsilon0", epsilon0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DebyeError::InvalidUnits(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self { hbar, c, epsilon0 })
    }

    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            epsilon0: 1.0,
        }
    }

    /// CODATA values of `hbar` (J s), `c` (m/s) and `epsilon_0` (F/m).
    pub fn si() -> Self {
        Self {
            hbar: 1.054_571_817e-34,
            c: 299_792_458.0,
            epsilon0: 8.854_187_812_8e-12,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }
}

fn check_tol(tol: f64) -> Result<(), DebyeError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(DebyeError::InvalidTolerance(tol))
    }
}

/// `prefactor * sum_n (-1)^n K_2((n+1) z)` with the sum taken to relative
/// accuracy `tol`. Terms are summed relative to the leading one so that
/// nothing underflows before the final multiplication.
fn bessel_series(prefactor: f64, z: f64, tol: f64) -> Result<(f64, SeriesResult), DebyeError> {
    let lead_scaled = bessel_k_scaled(2, z)?;
    let mut failure = None;
    let relative = alternating_sum(
        |j| {
            if j == 0 {
                return 1.0;
            }
            let arg = (j + 1) as f64 * z;
            match bessel_k_scaled(2, arg) {
                Ok(s) => s / lead_scaled * (-(j as f64) * z).exp(),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        tol,
        MAX_SERIES_TERMS,
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    let lead = lead_scaled * (-z).exp();
    let scale = prefactor * lead;
    Ok((
        scale * relative.value,
        SeriesResult {
            value: relative.value * lead,
            terms_used: relative.terms_used,
            remainder_bound: relative.remainder_bound * lead,
        },
    ))
}

/// Alternating Bessel series route.
pub fn debye_mass_sq_series(params: &ThermalParams, tol: f64) -> Result<DebyeResult, DebyeError> {
    check_tol(tol)?;
    let m = params.mass();
    let beta = match params.beta() {
        Beta::Ground => return Ok(ground_state(DebyeMethod::Series)),
        Beta::Finite(b) => b,
    };
    if m == 0.0 {
        return Err(DebyeError::UseMasslessRoute);
    }
    let e = params.charge_e();
    let prefactor = e * e * m * m / (PI * PI);
    let (value, series) = bessel_series(prefactor, beta * m, tol)?;
    Ok(DebyeResult::new(value, DebyeMethod::Series, Diagnostics::Series(series)))
}

fn ground_state(method: DebyeMethod) -> DebyeResult {
    DebyeResult::new(0.0, method, Diagnostics::Exact)
}

/// Momentum integral route, `(e^2/pi^2) int_0^inf dp p^2 beta n(1 - n)`
/// with `n` the Fermi factor at `omega_p`. Valid for every `m >= 0`.
pub fn debye_mass_sq_integral(params: &ThermalParams, tol: f64) -> Result<DebyeResult, DebyeError> {
    check_tol(tol)?;
    let beta = match params.beta() {
        Beta::Ground => return Ok(ground_state(DebyeMethod::Integral)),
        Beta::Finite(b) => b,
    };
    let m = params.mass();
    let e = params.charge_e();
    let scale = (1.0 / beta).max((m / beta).sqrt());
    let q = Quadrature {
        abs_tol: 0.0,
        rel_tol: tol,
        max_intervals: 4000,
    };
    let integrand = |p: f64| p * p * fermi_neg_derivative(beta, p.hypot(m));
    let r = q.semi_infinite(integrand, 0.0, scale)?.require_converged(tol)?;
    let prefactor = e * e / (PI * PI);
    let diag = QuadratureResult {
        value: r.value,
        error_estimate: r.error_estimate,
        ..r
    };
    Ok(DebyeResult::new(prefactor * r.value, DebyeMethod::Integral, Diagnostics::Quadrature(diag)))
}

/// Massless closed form `e^2 / (6 beta^2)`; the mass is ignored.
pub fn debye_mass_sq_massless(params: &ThermalParams) -> DebyeResult {
    match params.beta() {
        Beta::Ground => ground_state(DebyeMethod::Massless),
        Beta::Finite(b) => {
            let e = params.charge_e();
            DebyeResult::new(e * e / (6.0 * b * b), DebyeMethod::Massless, Diagnostics::Exact)
        }
    }
}

/// Series route with explicit `hbar`, `c` and `epsilon_0`:
/// `(4 e^2 m^2 hbar c / ((2 pi)^2 epsilon_0)) sum_n (-1)^n K_2((n+1) beta m c^2)`.
pub fn debye_mass_sq_si(params: &ThermalParams, units: &UnitSystem, tol: f64) -> Result<DebyeResult, DebyeError> {
    check_tol(tol)?;
    let m = params.mass();
    let beta = match params.beta() {
        Beta::Ground => return Ok(ground_state(DebyeMethod::Series)),
        Beta::Finite(b) => b,
    };
    if m == 0.0 {
        return Err(DebyeError::UseMasslessRoute);
    }
    let e = params.charge_e();
    let prefactor = 4.0 * e * e * m * m * units.hbar * units.c / ((2.0 * PI).powi(2) * units.epsilon0);
    let z = beta * m * units.c * units.c;
    let (value, series) = bessel_series(prefactor, z, tol)?;
    Ok(DebyeResult::new(value, DebyeMethod::Series, Diagnostics::Series(series)))
}

/// Canonical route: integral for `m = 0` or `beta m < 0.5`, series otherwise.
pub fn debye_mass_sq(params: &ThermalParams, tol: f64) -> Result<DebyeResult, DebyeError> {
    match params.beta() {
        Beta::Ground => Ok(ground_state(DebyeMethod::Series)),
        Beta::Finite(b) if params.mass() > 0.0 && b * params.mass() >= SERIES_CROSSOVER => {
            debye_mass_sq_series(params, tol)
        }
        Beta::Finite(_) => debye_mass_sq_integral(params, tol),
    }
}

/// Debye screening length `1/m_D` on the canonical route; `+inf` when the
/// square mass vanishes.
pub fn debye_length(params: &ThermalParams, tol: f64) -> Result<f64, DebyeError> {
    Ok(debye_mass_sq(params, tol)?.lambda_d)
}

/// Series and integral route at one `(beta, m)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteComparison {
    pub beta: f64,
    pub mass: f64,
    pub series: f64,
    pub integral: f64,
    pub rel_gap: f64,
}

/// Both routes on the Cartesian grid `betas x masses` (all masses > 0).
pub fn compare_routes(
    betas: &[f64],
    masses: &[f64],
    charge_e: f64,
    tol: f64,
) -> Result<Vec<RouteComparison>, DebyeError> {
    let points: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| masses.iter().map(move |&m| (b, m)))
        .collect();
    points
        .par_iter()
        .map(|&(beta, mass)| {
            let params = ThermalParams::new(beta, mass, charge_e, 1.0, 0.0)?;
            let series = debye_mass_sq_series(&params, tol)?.m_d_sq;
            let integral = debye_mass_sq_integral(&params, tol)?.m_d_sq;
            let rel_gap = if series == 0.0 && integral == 0.0 {
                0.0
            } else {
                ((series - integral) / series).abs()
            };
            Ok(RouteComparison {
                beta,
                mass,
                series,
                integral,
                rel_gap,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    fn params(beta: f64, m: f64) -> ThermalParams {
        ThermalParams::unit_coupling(beta, m).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ground_state_vanishes() {
        let p = params(f64::INFINITY, 1.0);
        assert_eq!(debye_mass_sq_series(&p, 1e-10).unwrap().m_d_sq, 0.0);
        assert_eq!(debye_mass_sq_integral(&p, 1e-10).unwrap().m_d_sq, 0.0);
        assert_eq!(debye_mass_sq_massless(&p).m_d_sq, 0.0);
        assert_eq!(debye_length(&p, 1e-10).unwrap(), f64::INFINITY);
    }

    #[test]
    fn massless_closed_form() {
        assert!(rel(debye_mass_sq_massless(&params(1.0, 0.0)).m_d_sq, 1.0 / 6.0) < 1e-15);
        assert!(rel(debye_mass_sq_massless(&params(0.1, 0.0)).m_d_sq, 100.0 / 6.0) < 1e-14);
        let p = ThermalParams::new(1.0, 0.0, 2.0, 1.0, 0.0).unwrap();
        assert!(rel(debye_mass_sq_massless(&p).m_d_sq, 4.0 / 6.0) < 1e-15);
    }

    #[test]
    fn integral_massless() {
        assert!(rel(debye_mass_sq_integral(&params(1.0, 0.0), 1e-12).unwrap().m_d_sq, 1.0 / 6.0) < 1e-8);
        assert!(rel(debye_mass_sq_integral(&params(2.0, 0.0), 1e-12).unwrap().m_d_sq, 1.0 / 24.0) < 1e-8);
    }

    #[test]
    fn series_needs_mass() {
        assert_eq!(
            debye_mass_sq_series(&params(1.0, 0.0), 1e-10).unwrap_err(),
            DebyeError::UseMasslessRoute
        );
    }

    #[test]
    fn series_and_integral_agree_at_unit_point() {
        let p = params(1.0, 1.0);
        let s = debye_mass_sq_series(&p, 1e-12).unwrap();
        let i = debye_mass_sq_integral(&p, 1e-12).unwrap();
        assert!(rel(s.m_d_sq, i.m_d_sq) < 1e-6);
        // Direct partial sums as an independent check of the series code.
        let mut direct = 0.0;
        for n in 0..60 {
            let t = bessel_k(2, (n + 1) as f64).unwrap();
            direct += if n % 2 == 0 { t } else { -t };
        }
        assert!(rel(s.m_d_sq, direct / (PI * PI)) < 1e-10);
    }

    #[test]
    fn two_term_dominance_at_low_temperature() {
        let s = debye_mass_sq_series(&params(10.0, 1.0), 1e-14).unwrap();
        let two = (bessel_k(2, 10.0).unwrap() - bessel_k(2, 20.0).unwrap()) / (PI * PI);
        assert!(rel(s.m_d_sq, two) < 1e-8);
        match s.diagnostics {
            Diagnostics::Series(d) => {
                assert!(d.terms_used >= 2);
                assert!(d.remainder_bound <= 1e-14 * bessel_k(2, 10.0).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn si_route() {
        let p = params(1.0, 1.0);
        let nat = debye_mass_sq_si(&p, &UnitSystem::natural(), 1e-12).unwrap();
        let ser = debye_mass_sq_series(&p, 1e-12).unwrap();
        assert!(rel(nat.m_d_sq, ser.m_d_sq) < 1e-12);
        let doubled = UnitSystem::new(1.0, 1.0, 2.0).unwrap();
        let half = debye_mass_sq_si(&p, &doubled, 1e-12).unwrap();
        assert!(rel(half.m_d_sq, 0.5 * ser.m_d_sq) < 1e-14);
        assert!(UnitSystem::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn lengths() {
        assert!((debye_length(&params(1.0, 0.0), 1e-12).unwrap() - 6f64.sqrt()).abs() < 1e-6);
        assert_eq!(screening_length(1.0), 1.0);
        assert_eq!(screening_length(0.0), f64::INFINITY);
    }

    #[test]
    fn canonical_route_selection() {
        assert_eq!(debye_mass_sq(&params(1.0, 0.0), 1e-10).unwrap().method, DebyeMethod::Integral);
        assert_eq!(debye_mass_sq(&params(0.2, 1.0), 1e-10).unwrap().method, DebyeMethod::Integral);
        assert_eq!(debye_mass_sq(&params(1.0, 1.0), 1e-10).unwrap().method, DebyeMethod::Series);
    }

    #[test]
    fn tiny_values_do_not_underflow_early() {
        let v = debye_mass_sq_series(&params(50.0, 1.0), 1e-10).unwrap().m_d_sq;
        assert!(v > 0.0 && v < 1e-19);
        let w = debye_mass_sq_integral(&params(50.0, 1.0), 1e-10).unwrap().m_d_sq;
        assert!(rel(v, w) < 1e-6);
    }
}
