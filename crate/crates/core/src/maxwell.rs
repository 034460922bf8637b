//! Stationary screened Maxwell equation for radially symmetric sources.
//!
//! The potential is obtained by spectral division, `A(r)` being the radial
//! inverse Fourier transform of `j(p) / D(p)`, with `D` either the full
//! effective denominator or its zero-momentum approximation
//! `p^2 + lambda m_D^2`.

use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

use crate::debye::{debye_mass_sq, DebyeError};
use crate::decay::{fit_decay, DecayError, FitModel};
use crate::polarization::{f_hat_temporal, Channel, PolarizationError};
use crate::quadrature::{sine_transform_radial, QuadratureError};
use crate::specfun::{Beta, ThermalParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaxwellError {
    #[error("invalid source: {0}")]
    InvalidSource(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("full-kernel profiles are implemented for the temporal channel only")]
    UnsupportedChannel,
    #[error("effective denominator changes sign near p = {momentum} (value {value:e})")]
    Pole { momentum: f64, value: f64 },
    #[error(transparent)]
    Debye(#[from] DebyeError),
    #[error(transparent)]
    Polarization(#[from] PolarizationError),
    #[error("radial transform: {0}")]
    Transform(#[from] QuadratureError),
    #[error("rate fit: {0}")]
    Fit(#[from] DecayError),
}

/// Radial charge distribution, each with total charge `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceFamily {
    /// Exact point charge, the `epsilon -> 0` end of the smoothed family.
    Point,
    /// Gaussian mollifier `q exp(-|x|^2/epsilon^2) / (pi^{3/2} epsilon^3)`.
    SmoothedPoint { epsilon: f64 },
    /// Normal density with standard deviation `sigma` per axis.
    Gaussian { sigma: f64 },
    /// Constant density on a ball.
    UniformBall { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    family: SourceFamily,
    charge_q: f64,
    channel: Channel,
}

fn positive(name: &str, v: f64) -> Result<f64, MaxwellError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(MaxwellError::InvalidSource(format!("{name} must be > 0, got {v}")))
    }
}

impl SourceSpec {
    pub fn new(family: SourceFamily, charge_q: f64) -> Result<Self, MaxwellError> {
        if !charge_q.is_finite() {
            return Err(MaxwellError::InvalidSource(format!("charge must be finite, got {charge_q}")));
        }
        match family {
            SourceFamily::Point => {}
            SourceFamily::SmoothedPoint { epsilon } => {
                positive("epsilon", epsilon)?;
            }
            SourceFamily::Gaussian { sigma } => {
                positive("sigma", sigma)?;
            }
            SourceFamily::UniformBall { radius } => {
                positive("radius", radius)?;
            }
        }
        Ok(Self {
            family,
            charge_q,
            channel: Channel::Temporal,
        })
    }

    pub fn point(q: f64) -> Result<Self, MaxwellError> {
        Self::new(SourceFamily::Point, q)
    }
    pub fn smoothed_point(epsilon: f64, q: f64) -> Result<Self, MaxwellError> {
        Self::new(SourceFamily::SmoothedPoint { epsilon }, q)
    }
    pub fn gaussian(sigma: f64, q: f64) -> Result<Self, MaxwellError> {
        Self::new(SourceFamily::Gaussian { sigma }, q)
    }
    pub fn uniform_ball(radius: f64, q: f64) -> Result<Self, MaxwellError> {
        Self::new(SourceFamily::UniformBall { radius }, q)
    }

    pub fn with_channel(mut self, channel: Channel) -> Self {
        self.channel = channel;
        self
    }

    pub fn with_charge(mut self, q: f64) -> Self {
        self.charge_q = q;
        self
    }

    pub fn family(&self) -> SourceFamily {
        self.family
    }
    pub fn charge_q(&self) -> f64 {
        self.charge_q
    }
    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// Charge density at radius `r`; infinite at the origin for a point.
    pub fn density(&self, r: f64) -> f64 {
        let q = self.charge_q;
        match self.family {
            SourceFamily::Point => {
                if r == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            SourceFamily::SmoothedPoint { epsilon } => {
                q * (-(r / epsilon).powi(2)).exp() / (PI.powf(1.5) * epsilon.powi(3))
            }
            SourceFamily::Gaussian { sigma } => {
                q * (-0.5 * (r / sigma).powi(2)).exp() / ((2.0 * PI).powf(1.5) * sigma.powi(3))
            }
            SourceFamily::UniformBall { radius } => {
                if r <= radius {
                    q * 3.0 / (4.0 * PI * radius.powi(3))
                } else {
                    0.0
                }
            }
        }
    }
}

/// `3 (sin x - x cos x) / x^3`, the transform of the unit-charge ball.
fn ball_form_factor(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0)))
    } else {
        3.0 * (x.sin() - x * x.cos()) / (x * x * x)
    }
}

/// Fourier transform of the source density at momentum magnitude `p`.
pub fn source_fourier(source: &SourceSpec, p_mag: f64) -> f64 {
    let q = source.charge_q;
    match source.family {
        SourceFamily::Point => q,
        SourceFamily::SmoothedPoint { epsilon } => q * (-0.25 * (epsilon * p_mag).powi(2)).exp(),
        SourceFamily::Gaussian { sigma } => q * (-0.5 * (sigma * p_mag).powi(2)).exp(),
        SourceFamily::UniformBall { radius } => q * ball_form_factor(p_mag * radius),
    }
}

/// `q exp(-sqrt(lambda m_D^2) r) / (4 pi r)`.
pub fn yukawa_reference(q: f64, lambda: f64, m_d_sq: f64, r: f64) -> Result<f64, MaxwellError> {
    if !(r > 0.0) {
        return Err(MaxwellError::InvalidArgument(format!("radius must be > 0, got {r}")));
    }
    if !(lambda >= 0.0 && m_d_sq >= 0.0) {
        return Err(MaxwellError::InvalidArgument(format!(
            "need lambda >= 0 and m_D^2 >= 0, got {lambda}, {m_d_sq}"
        )));
    }
    Ok(q * (-(lambda * m_d_sq).sqrt() * r).exp() / (4.0 * PI * r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    FullKernel,
    ZerothOrder,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::FullKernel => "full_kernel",
            Mode::ZerothOrder => "zeroth_order",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full_kernel" => Ok(Mode::FullKernel),
            "zeroth_order" => Ok(Mode::ZerothOrder),
            other => Err(format!("unknown mode '{other}' (expected full_kernel or zeroth_order)")),
        }
    }
}

/// Cubic spline with zero slope at the left end (the kernels are even in
/// momentum) and a natural right end.
#[derive(Debug, Clone, PartialEq)]
struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 3 && y.len() == n);
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        // Tridiagonal system for second derivatives.
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        b[0] = 2.0 * h[0];
        c[0] = h[0];
        d[0] = 6.0 * (y[1] - y[0]) / h[0];
        for i in 1..n - 1 {
            a[i] = h[i - 1];
            b[i] = 2.0 * (h[i - 1] + h[i]);
            c[i] = h[i];
            d[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        b[n - 1] = 1.0;
        for i in 1..n {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = d[n - 1] / b[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
        }
        Self { x, y, m }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// Temporal thermal kernel tabulated once on `[0, P]` and shared by every
/// radius of a profile. Beyond `P` the tail `F(P) (P/p)^2` is used.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    spline: Spline,
    p_max: f64,
    tail: f64,
    lambda: f64,
    local: f64,
}

impl KernelTable {
    pub const DEFAULT_POINTS: usize = 241;

    pub fn build(params: &ThermalParams, points: usize, tol: f64) -> Result<Self, MaxwellError> {
        if points < 8 {
            return Err(MaxwellError::InvalidArgument(format!("kernel table needs >= 8 points, got {points}")));
        }
        let thermal_scale = match params.beta() {
            Beta::Finite(b) => 40.0 / b,
            Beta::Ground => 1.0,
        };
        let p_max = thermal_scale.max(10.0 * params.mass());
        let grid: Vec<f64> = (0..points).map(|i| p_max * i as f64 / (points - 1) as f64).collect();
        let values: Vec<f64> = grid
            .par_iter()
            .map(|&p| f_hat_temporal(p, params, tol))
            .collect::<Result<_, _>>()?;
        let tail = values[points - 1];
        let table = Self {
            spline: Spline::new(grid, values),
            p_max,
            tail,
            lambda: params.lambda(),
            local: params.charge_e().powi(2) * params.a1(),
        };
        table.check_sign()?;
        Ok(table)
    }

    pub fn f_hat(&self, p: f64) -> f64 {
        if p <= self.p_max {
            self.spline.eval(p)
        } else {
            self.tail * (self.p_max / p).powi(2)
        }
    }

    /// `p^2 - lambda (F(p) + e^2 a1 p^2)`.
    pub fn denominator(&self, p: f64) -> f64 {
        p * p - self.lambda * (self.f_hat(p) + self.local * p * p)
    }

    pub fn static_value(&self) -> f64 {
        self.spline.y[0]
    }

    fn check_sign(&self) -> Result<(), MaxwellError> {
        if self.lambda * self.local >= 1.0 {
            return Err(MaxwellError::Pole {
                momentum: f64::INFINITY,
                value: 1.0 - self.lambda * self.local,
            });
        }
        for (i, &p) in self.spline.x.iter().enumerate().skip(1) {
            let d = self.denominator(p);
            if !(d > 0.0) {
                let prev = self.spline.x[i - 1];
                return Err(MaxwellError::Pole {
                    momentum: 0.5 * (prev + p),
                    value: d,
                });
            }
        }
        Ok(())
    }
}

/// The denominator `D(p)` used for the spectral division.
#[derive(Debug, Clone, PartialEq)]
pub enum Propagator {
    /// `p^2 + mu_sq`.
    Yukawa { mu_sq: f64 },
    Full(KernelTable),
}

impl Propagator {
    pub fn yukawa(lambda: f64, m_d_sq: f64) -> Result<Self, MaxwellError> {
        if !(lambda >= 0.0 && m_d_sq >= 0.0 && lambda.is_finite() && m_d_sq.is_finite()) {
            return Err(MaxwellError::InvalidArgument(format!(
                "need lambda >= 0 and m_D^2 >= 0, got {lambda}, {m_d_sq}"
            )));
        }
        Ok(Propagator::Yukawa { mu_sq: lambda * m_d_sq })
    }

    /// Zero-momentum approximation with the Debye mass of `params`.
    pub fn zeroth_order(params: &ThermalParams, tol: f64) -> Result<Self, MaxwellError> {
        let m_d_sq = debye_mass_sq(params, tol)?.m_d_sq;
        Self::yukawa(params.lambda(), m_d_sq)
    }

    pub fn full_kernel(params: &ThermalParams, tol: f64) -> Result<Self, MaxwellError> {
        Ok(Propagator::Full(KernelTable::build(params, KernelTable::DEFAULT_POINTS, tol)?))
    }

    pub fn for_mode(mode: Mode, params: &ThermalParams, tol: f64) -> Result<Self, MaxwellError> {
        match mode {
            Mode::ZerothOrder => Self::zeroth_order(params, tol),
            Mode::FullKernel => Self::full_kernel(params, tol),
        }
    }

    pub fn denominator(&self, p: f64) -> f64 {
        match self {
            Propagator::Yukawa { mu_sq } => p * p + mu_sq,
            Propagator::Full(table) => table.denominator(p),
        }
    }

    /// Effective screening mass squared at zero momentum.
    pub fn static_mass_sq(&self) -> f64 {
        match self {
            Propagator::Yukawa { mu_sq } => *mu_sq,
            Propagator::Full(table) => -table.lambda * table.static_value(),
        }
    }
}

/// Potential values `A(r)` of `source` under `propagator`, computed in
/// parallel over radii.
pub fn solve(source: &SourceSpec, propagator: &Propagator, r_grid: &[f64], tol: f64) -> Result<Vec<f64>, MaxwellError> {
    if let Propagator::Full(_) = propagator {
        if source.channel != Channel::Temporal {
            return Err(MaxwellError::UnsupportedChannel);
        }
    }
    let f = |p: f64| source_fourier(source, p) / propagator.denominator(p);
    Ok(sine_transform_radial(f, r_grid, tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileTolerances {
    /// Relative tolerance of each transformed value.
    pub transform: f64,
    /// Tolerance of the Debye mass or kernel table behind the denominator.
    pub kernel: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub r_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub mode: Mode,
    pub source: SourceSpec,
    pub params: ThermalParams,
    pub tolerances: ProfileTolerances,
    /// `lambda m_D^2` (zeroth order) or `-lambda F(0)` (full kernel).
    pub static_mass_sq: f64,
}

impl RadialProfile {
    /// Exponential rate of `r A(r)` fitted on `[r_min, r_max]`.
    pub fn fitted_rate(&self, r_min: f64, r_max: f64) -> Result<f64, MaxwellError> {
        fitted_rate(&self.r_grid, &self.values, r_min, r_max)
    }
}

/// Exponential decay rate of `r A(r)` on a window, from a log-linear fit.
pub fn fitted_rate(r_grid: &[f64], values: &[f64], r_min: f64, r_max: f64) -> Result<f64, MaxwellError> {
    let samples: Vec<(f64, f64)> = r_grid
        .iter()
        .zip(values)
        .filter(|(&r, _)| r >= r_min && r <= r_max)
        .map(|(&r, &a)| (r, r * a))
        .collect();
    Ok(-fit_decay(&samples, FitModel::LogLinear)?.slope)
}

/// Logarithmic grid with `per_decade` points per decade from `r_min` to
/// `r_max` inclusive.
pub fn log_grid(r_min: f64, r_max: f64, per_decade: usize) -> Result<Vec<f64>, MaxwellError> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite() && per_decade > 0) {
        return Err(MaxwellError::InvalidArgument(format!(
            "log grid needs 0 < r_min < r_max and points > 0, got {r_min}, {r_max}, {per_decade}"
        )));
    }
    let decades = (r_max / r_min).log10();
    let steps = (decades * per_decade as f64).ceil().max(1.0) as usize;
    Ok((0..=steps)
        .map(|i| r_min * 10f64.powf(decades * i as f64 / steps as f64))
        .collect())
}

/// 64 points per decade from `0.05 / m_D` to `20 / m_D`. With no screening
/// mass the unit length is used instead.
pub fn default_r_grid(m_d: f64) -> Vec<f64> {
    let length = if m_d > 0.0 && m_d.is_finite() { 1.0 / m_d } else { 1.0 };
    log_grid(0.05 * length, 20.0 * length, 64).expect("fixed grid bounds are valid")
}

/// Kernel tolerance used for a transform tolerance `tol`.
pub fn kernel_tolerance(tol: f64) -> f64 {
    (1e-2 * tol).clamp(1e-9, 1e-6)
}

/// Propagator seen by a source in `channel` at the thermal state `params`.
pub fn screening_propagator(
    channel: Channel,
    params: &ThermalParams,
    mode: Mode,
    tol: f64,
) -> Result<Propagator, MaxwellError> {
    if mode == Mode::FullKernel && channel != Channel::Temporal {
        return Err(MaxwellError::UnsupportedChannel);
    }
    match (mode, channel) {
        // Both spatial kernels vanish at zero momentum.
        (Mode::ZerothOrder, Channel::Spatial) => Propagator::yukawa(params.lambda(), 0.0),
        _ => Propagator::for_mode(mode, params, kernel_tolerance(tol)),
    }
}

/// Solves for `source` at the thermal state `params`.
pub fn screening_profile(
    source: &SourceSpec,
    params: &ThermalParams,
    mode: Mode,
    r_grid: &[f64],
    tol: f64,
) -> Result<RadialProfile, MaxwellError> {
    let propagator = screening_propagator(source.channel, params, mode, tol)?;
    let values = solve(source, &propagator, r_grid, tol)?;
    Ok(RadialProfile {
        r_grid: r_grid.to_vec(),
        values,
        mode,
        source: *source,
        params: *params,
        tolerances: ProfileTolerances {
            transform: tol,
            kernel: kernel_tolerance(tol),
        },
        static_mass_sq: propagator.static_mass_sq(),
    })
}

/// One mollifier width at one probe radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaLimitRow {
    pub epsilon: f64,
    pub r: f64,
    pub value: f64,
    pub reference: f64,
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSummary {
    pub r: f64,
    pub monotone: bool,
    pub final_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaLimitReport {
    pub rows: Vec<DeltaLimitRow>,
    pub probes: Vec<ProbeSummary>,
}

impl DeltaLimitReport {
    pub fn all_monotone(&self) -> bool {
        self.probes.iter().all(|p| p.monotone)
    }

    pub fn max_final_gap(&self) -> f64 {
        self.probes.iter().map(|p| p.final_gap).fold(0.0, f64::max)
    }
}

/// Profiles of the smoothed point charge along a decreasing ladder of
/// widths, compared at each probe radius with the exact point-charge
/// solution under the same propagator.
pub fn delta_family_limit(
    epsilons: &[f64],
    q: f64,
    propagator: &Propagator,
    r_probe: &[f64],
    tol: f64,
) -> Result<DeltaLimitReport, MaxwellError> {
    if epsilons.is_empty() || epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(MaxwellError::InvalidArgument("epsilons must be non-empty and strictly decreasing".into()));
    }
    if r_probe.is_empty() {
        return Err(MaxwellError::InvalidArgument("no probe radius given".into()));
    }
    let point = SourceSpec::point(q)?;
    let reference = match propagator {
        Propagator::Yukawa { mu_sq } => r_probe
            .iter()
            .map(|&r| yukawa_reference(q, 1.0, *mu_sq, r))
            .collect::<Result<Vec<_>, _>>()?,
        Propagator::Full(_) => solve(&point, propagator, r_probe, tol)?,
    };
    let mut rows = Vec::new();
    for &eps in epsilons {
        let source = SourceSpec::smoothed_point(eps, q)?;
        let values = solve(&source, propagator, r_probe, tol)?;
        for ((&r, &value), &reference) in r_probe.iter().zip(&values).zip(&reference) {
            rows.push(DeltaLimitRow {
                epsilon: eps,
                r,
                value,
                reference,
                rel_gap: ((value - reference) / reference).abs(),
            });
        }
    }
    let probes = r_probe
        .iter()
        .map(|&r| {
            let gaps: Vec<f64> = rows.iter().filter(|row| row.r == r).map(|row| row.rel_gap).collect();
            ProbeSummary {
                r,
                monotone: gaps.windows(2).all(|w| w[1] < w[0]),
                final_gap: *gaps.last().expect("at least one epsilon"),
            }
        })
        .collect();
    Ok(DeltaLimitReport { rows, probes })
}
