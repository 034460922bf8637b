//! Momentum-dependent polarization kernels of the thermal Dirac field and
//! the effective denominator of the screened Maxwell propagator.
//!
//! With `k = p_tilde + p`, `c = m^2 + k.p` and `n` the Fermi factor, the
//! thermal kernels are
//!
//! ```text
//! F_0(p_tilde) =  C int d^3p ([w n]_p - [w n]_k + c [n/w]_p - c [n/w]_k) / (w_p^2 - w_k^2)
//! F_k(p_tilde) = -C int d^3p ([w n]_p - [w n]_k - c [n/w]_p + c [n/w]_k) / (w_p^2 - w_k^2)
//! ```
//!
//! with `C = e^2 / (4 pi^3)`, so that `F_0(0) = -m_D^2` in the normalization
//! of [`crate::debye`]. Both quotients are evaluated as divided differences
//! in `w`, which removes the `0/0` on the set `w_p = w_k`.

use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

use crate::debye::{debye_mass_sq, DebyeError};
use crate::quadrature::{
    integrate_radial_angular_with, Quadrature, QuadratureError, RadialAngularOptions,
};
use crate::specfun::{fermi, fermi_neg_derivative, Beta, ThermalParams};

/// Relative gap below which a divided difference switches to the
/// derivative at the midpoint.
const COINCIDENCE_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `mu = 0`, the electric potential.
    Temporal,
    /// `mu = k`, a spatial component.
    Spatial,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Temporal => "temporal",
            Channel::Spatial => "spatial",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Channel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "temporal" => Ok(Channel::Temporal),
            "spatial" => Ok(Channel::Spatial),
            other => Err(format!("unknown channel '{other}' (expected temporal or spatial)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarizationError {
    #[error("{channel} kernel at p = {p_tilde}: {source}")]
    Quadrature {
        channel: Channel,
        p_tilde: f64,
        source: QuadratureError,
    },
    #[error(transparent)]
    Debye(#[from] DebyeError),
    #[error(
        "spatial vacuum kernel at p = {p_tilde} diverges for m = 0 \
         (infrared end of the spectral integral); refusing to compute"
    )]
    InfraredDivergence { p_tilde: f64 },
    #[error("{channel} denominator vanishes near p = {momentum} (value {value:e})")]
    Pole {
        channel: Channel,
        momentum: f64,
        value: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("kernel scan stopped after {completed} of {total} points: {source}")]
    ScanFailed {
        completed: usize,
        total: usize,
        source: Box<PolarizationError>,
    },
}

/// `(h(a) - h(b)) / (a - b)`, or `h'((a + b)/2)` when `a` and `b` agree to
/// a relative `1e-6`. The kernels themselves use an exact factorization for
/// the Fermi factor instead; this is the general fallback.
pub fn divided_difference<H, D>(h: H, dh: D, a: f64, b: f64) -> f64
where
    H: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let gap = a - b;
    if gap.abs() < COINCIDENCE_GAP * (a.abs() + b.abs()) || gap == 0.0 {
        dh(0.5 * (a + b))
    } else {
        (h(a) - h(b)) / gap
    }
}

fn check_inputs(p_tilde: f64, tol: f64) -> Result<(), PolarizationError> {
    if !(p_tilde >= 0.0 && p_tilde.is_finite()) {
        return Err(PolarizationError::InvalidArgument(format!("momentum must be >= 0, got {p_tilde}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(PolarizationError::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
    }
    Ok(())
}

/// `(n(a) - n(b)) / (a - b)` for the Fermi factor `n`, from the exact
/// factorization `n(a) - n(b) = -n(a) (1 - n(b)) expm1(beta (a - b))`. No
/// cancellation occurs however close `a` and `b` are.
fn fermi_divided_difference(beta: f64, a: f64, b: f64) -> f64 {
    let (a, b) = if a > b { (b, a) } else { (a, b) };
    let x = beta * (a - b);
    if x == 0.0 {
        return -fermi_neg_derivative(beta, a);
    }
    -fermi(beta, a) * fermi(beta, -b) * x.exp_m1() / (a - b)
}

/// Integrand of either thermal kernel at `(p, cos theta)` without the
/// prefactor `C`.
fn thermal_integrand(channel: Channel, beta: f64, m: f64, p_tilde: f64, p: f64, cos: f64) -> f64 {
    let k_dot_p = p * p + p * p_tilde * cos;
    let k = (p * p + p_tilde * p_tilde + 2.0 * p * p_tilde * cos).max(0.0).sqrt();
    let wp = p.hypot(m);
    let wk = k.hypot(m);
    let c = m * m + k_dot_p;
    let (np, nk) = (fermi(beta, wp), fermi(beta, wk));
    let dn = fermi_divided_difference(beta, wp, wk);
    // Divided differences of w n(w) and n(w)/w.
    let q1 = np + wk * dn;
    let q2 = dn / wp - nk / (wp * wk);
    let sum = wp + wk;
    match channel {
        Channel::Temporal => (q1 + c * q2) / sum,
        Channel::Spatial => -(q1 - c * q2) / sum,
    }
}

/// Momentum beyond which the Fermi-suppressed integrand is below `floor`.
fn thermal_cutoff(beta: f64, m: f64, p_tilde: f64, floor: f64) -> f64 {
    let mut reach = 40.0;
    loop {
        let p_max = p_tilde + reach / beta;
        // Every Fermi factor is below e^{-beta (p - p_tilde)}; the remaining
        // rational factors grow at most like p^4 after the measure.
        let bound = (-reach).exp() * (1.0 + p_max + m).powi(4) * (1.0 + beta);
        if bound < 0.1 * floor || reach > 800.0 {
            return p_max;
        }
        reach += 10.0;
    }
}

fn thermal_kernel(channel: Channel, p_tilde: f64, params: &ThermalParams, tol: f64) -> Result<f64, PolarizationError> {
    check_inputs(p_tilde, tol)?;
    let beta = match params.beta() {
        Beta::Ground => return Ok(0.0),
        Beta::Finite(b) => b,
    };
    let e = params.charge_e();
    if p_tilde == 0.0 {
        return match channel {
            // The static value comes from the dedicated Debye formula rather
            // than the 0/0 limit of the integrand.
            Channel::Temporal => Ok(-debye_mass_sq(params, tol)?.m_d_sq),
            Channel::Spatial => Ok(0.0),
        };
    }
    let m = params.mass();
    let prefactor = e * e / (4.0 * PI.powi(3));
    let natural = 1.0 / (beta * beta);
    let abs_floor = 1e-3 * tol * natural;
    let opts = RadialAngularOptions {
        tol: abs_floor,
        rel_tol: tol,
        p_max: Some(thermal_cutoff(beta, m, p_tilde, abs_floor)),
        scale: 1.0 / beta,
    };
    let r = integrate_radial_angular_with(|p, c| thermal_integrand(channel, beta, m, p_tilde, p, c), opts)
        .and_then(|r| r.require_converged(tol))
        .map_err(|source| PolarizationError::Quadrature {
            channel,
            p_tilde,
            source,
        })?;
    Ok(prefactor * r.value)
}

/// Thermal kernel in the temporal channel. Its value at zero momentum is
/// `-m_D^2`.
pub fn f_hat_temporal(p_tilde: f64, params: &ThermalParams, tol: f64) -> Result<f64, PolarizationError> {
    thermal_kernel(Channel::Temporal, p_tilde, params, tol)
}

/// Thermal kernel in a spatial channel.
///
/// At exactly zero momentum the numerator vanishes identically and 0 is
/// returned. The limit from positive momenta is not zero.
pub fn f_hat_spatial(p_tilde: f64, params: &ThermalParams, tol: f64) -> Result<f64, PolarizationError> {
    thermal_kernel(Channel::Spatial, p_tilde, params, tol)
}

pub fn f_hat(channel: Channel, p_tilde: f64, params: &ThermalParams, tol: f64) -> Result<f64, PolarizationError> {
    thermal_kernel(channel, p_tilde, params, tol)
}

/// Spectral integral of the spatial vacuum kernel,
/// `int_{4m^2}^inf ds s^{-5/2} (s/4 - m^2)^{1/2} (s/4 + m^2/2) / (p^2 + s)`,
/// after `s = 4 m^2 + u^2`.
fn vacuum_spectral_integral(p_tilde: f64, m: f64, tol: f64) -> Result<f64, QuadratureError> {
    let integrand = |u: f64| {
        let s = 4.0 * m * m + u * u;
        u * u * (0.25 * s + 0.5 * m * m) / (s * s * s.sqrt() * (p_tilde * p_tilde + s))
    };
    let q = Quadrature {
        abs_tol: 0.0,
        rel_tol: tol,
        max_intervals: 2000,
    };
    Ok(q.semi_infinite(integrand, 0.0, 2.0 * m)?.require_converged(tol)?.value)
}

/// Vacuum plus renormalization kernel: `e^2 a1 p^2`, and in the spatial
/// channel the Kallen-Lehmann term on top.
pub fn b_hat(channel: Channel, p_tilde: f64, params: &ThermalParams, tol: f64) -> Result<f64, PolarizationError> {
    check_inputs(p_tilde, tol)?;
    if p_tilde == 0.0 {
        return Ok(0.0);
    }
    let e2 = params.charge_e().powi(2);
    let local = e2 * params.a1() * p_tilde * p_tilde;
    match channel {
        Channel::Temporal => Ok(local),
        Channel::Spatial => {
            let m = params.mass();
            if m == 0.0 {
                return Err(PolarizationError::InfraredDivergence { p_tilde });
            }
            let spectral = vacuum_spectral_integral(p_tilde, m, tol).map_err(|source| {
                PolarizationError::Quadrature {
                    channel,
                    p_tilde,
                    source,
                }
            })?;
            let prefactor = 16.0 * e2 * p_tilde.powi(4) / (3.0 * (2.0 * PI).powi(5));
            Ok(local + prefactor * spectral)
        }
    }
}

fn denominator_from(p_tilde: f64, lambda: f64, f: f64, b: f64) -> f64 {
    if lambda == 0.0 {
        p_tilde * p_tilde
    } else {
        p_tilde * p_tilde - lambda * (f + b)
    }
}

fn is_pole(p_tilde: f64, lambda: f64, f: f64, b: f64, tol: f64) -> bool {
    let d = denominator_from(p_tilde, lambda, f, b);
    d.abs() <= tol * (p_tilde * p_tilde + lambda * (f + b).abs())
}

/// `p^2 - lambda (F(p) + B(p))`.
pub fn effective_denominator(
    channel: Channel,
    p_tilde: f64,
    params: &ThermalParams,
    tol: f64,
) -> Result<f64, PolarizationError> {
    if !(p_tilde > 0.0) {
        return Err(PolarizationError::InvalidArgument(format!(
            "denominator needs momentum > 0, got {p_tilde}"
        )));
    }
    let lambda = params.lambda();
    if lambda == 0.0 {
        check_inputs(p_tilde, tol)?;
        return Ok(p_tilde * p_tilde);
    }
    let f = f_hat(channel, p_tilde, params, tol)?;
    let b = b_hat(channel, p_tilde, params, tol)?;
    let d = denominator_from(p_tilde, lambda, f, b);
    if is_pole(p_tilde, lambda, f, b, tol) {
        return Err(PolarizationError::Pole {
            channel,
            momentum: p_tilde,
            value: d,
        });
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub p_tilde: f64,
    pub f_hat: f64,
    pub b_hat: f64,
    pub denominator: f64,
}

/// Kernel values over a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelScan {
    pub channel: Channel,
    pub points: Vec<KernelPoint>,
    pub params: ThermalParams,
    /// Tolerance every point (including the zero-momentum identities) was
    /// computed to.
    pub tol: f64,
}

impl KernelScan {
    pub fn p_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p_tilde).collect()
    }
}

/// Evaluates both kernels and the denominator on a sorted grid, in parallel.
/// A sign change or zero of the denominator between positive grid points
/// is reported as a pole.
pub fn scan_kernel(
    channel: Channel,
    p_grid: &[f64],
    params: &ThermalParams,
    tol: f64,
) -> Result<KernelScan, PolarizationError> {
    if p_grid.is_empty() {
        return Err(PolarizationError::InvalidArgument("empty momentum grid".into()));
    }
    if p_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(PolarizationError::InvalidArgument("momentum grid must be strictly increasing".into()));
    }
    let evaluated: Vec<Result<KernelPoint, PolarizationError>> = p_grid
        .par_iter()
        .map(|&p| {
            let f = f_hat(channel, p, params, tol)?;
            let b = b_hat(channel, p, params, tol)?;
            Ok(KernelPoint {
                p_tilde: p,
                f_hat: f,
                b_hat: b,
                denominator: denominator_from(p, params.lambda(), f, b),
            })
        })
        .collect();
    let total = evaluated.len();
    let mut points = Vec::with_capacity(total);
    for (completed, r) in evaluated.into_iter().enumerate() {
        match r {
            Ok(point) => points.push(point),
            Err(e) => {
                return Err(PolarizationError::ScanFailed {
                    completed,
                    total,
                    source: Box::new(e),
                })
            }
        }
    }
    let lambda = params.lambda();
    for (i, pt) in points.iter().enumerate() {
        if pt.p_tilde > 0.0 && is_pole(pt.p_tilde, lambda, pt.f_hat, pt.b_hat, tol) {
            return Err(PolarizationError::Pole {
                channel,
                momentum: pt.p_tilde,
                value: pt.denominator,
            });
        }
        if i > 0 {
            let prev = &points[i - 1];
            if prev.p_tilde > 0.0 && prev.denominator.signum() != pt.denominator.signum() {
                return Err(PolarizationError::Pole {
                    channel,
                    momentum: 0.5 * (prev.p_tilde + pt.p_tilde),
                    value: pt.denominator,
                });
            }
        }
    }
    Ok(KernelScan {
        channel,
        points,
        params: *params,
        tol,
    })
}
