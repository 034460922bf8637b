//! Controlled numerical integration.
//!
//! Everything here is built on one globally adaptive 21-point Gauss–Kronrod
//! rule. Semi-infinite ranges are mapped onto `[0, 1)`, the radial-angular
//! reduction nests two adaptive passes, the radial sine transform walks the
//! oscillation half-periods and accelerates the alternating tail, and the
//! 6D Monte Carlo estimator partitions samples into seeded blocks so serial
//! and parallel runs give identical bits.

mod gauss_kronrod;
mod monte_carlo;
mod sine;

use thiserror::Error;

pub use gauss_kronrod::Quadrature;
pub(crate) use monte_carlo::cubic_radial_mass;
pub use monte_carlo::{monte_carlo_6d, ImportanceSampler, MonteCarloResult, Sampler3};
pub use sine::{sine_transform_radial, sine_transform_radial_with, SineTransformOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integrand returned non-finite value {value} at abscissa {abscissa}")]
    NonFinite { abscissa: f64, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("transform input does not decay: {0}")]
    NonDecaying(String),
    #[error("sampler density vanishes at a sampled point {point:?}")]
    SamplerMismatch { point: [f64; 6] },
    #[error("tolerance {tol:e} not reached (estimate {value:e} +/- {error:e})")]
    NotConverged { value: f64, error: f64, tol: f64 },
}

/// Value, error estimate and bookkeeping of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// Turns a non-converged result into an error.
    pub fn require_converged(self, tol: f64) -> Result<Self, QuadratureError> {
        if self.converged {
            Ok(self)
        } else {
            Err(QuadratureError::NotConverged {
                value: self.value,
                error: self.error_estimate,
                tol,
            })
        }
    }
}

/// Smooth, rapidly decaying momentum-space test function standing in for
/// the Fourier data of a localized observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestProfile {
    width: f64,
    support_radius: f64,
}

impl TestProfile {
    pub fn gaussian(width: f64, support_radius: f64) -> Result<Self, QuadratureError> {
        if !(width > 0.0 && width.is_finite()) || !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(QuadratureError::InvalidArgument(format!(
                "test profile needs width > 0 and R > 0, got {width}, {support_radius}"
            )));
        }
        Ok(Self { width, support_radius })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// `exp(-width^2 p^2 / 2)`.
    pub fn f_hat(&self, p_mag: f64) -> f64 {
        let x = self.width * p_mag;
        (-0.5 * x * x).exp()
    }

    /// Momentum beyond which `f_hat` is below `1e-18`.
    pub fn momentum_cutoff(&self) -> f64 {
        (2.0 * 18.0 * std::f64::consts::LN_10).sqrt() / self.width
    }
}

/// `int_0^inf f` to absolute tolerance `tol`. `decay_scale` sets the length
/// over which the integrand falls off and fixes the compactifying map.
pub fn integrate_semi_infinite<F>(f: F, decay_scale: f64, tol: f64) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    Quadrature::absolute(tol).semi_infinite(f, 0.0, decay_scale)
}

/// Options for [`integrate_radial_angular_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialAngularOptions {
    /// Absolute tolerance of the full 3D integral.
    pub tol: f64,
    /// Relative tolerance of the full 3D integral.
    pub rel_tol: f64,
    /// Hard momentum cutoff, if the caller has a rigorous tail bound.
    pub p_max: Option<f64>,
    /// Momentum scale of the integrand (used for the semi-infinite map).
    pub scale: f64,
}

impl RadialAngularOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            rel_tol: 0.0,
            p_max: None,
            scale: 1.0,
        }
    }
}

/// `2 pi int_0^inf dp p^2 int_{-1}^{1} dcos kernel(p, cos)`.
pub fn integrate_radial_angular<K>(kernel: K, tol: f64) -> Result<QuadratureResult, QuadratureError>
where
    K: Fn(f64, f64) -> f64,
{
    integrate_radial_angular_with(kernel, RadialAngularOptions::new(tol))
}

pub fn integrate_radial_angular_with<K>(
    kernel: K,
    opts: RadialAngularOptions,
) -> Result<QuadratureResult, QuadratureError>
where
    K: Fn(f64, f64) -> f64,
{
    use std::cell::{Cell, RefCell};
    use std::f64::consts::PI;

    if !(opts.tol > 0.0) && !(opts.rel_tol > 0.0) {
        return Err(QuadratureError::InvalidArgument("tolerance must be > 0".into()));
    }
    let reach = opts.p_max.unwrap_or(20.0 * opts.scale).max(1e-300);
    let inner_abs = 1e-3 * opts.tol / (2.0 * PI * reach.powi(3) / 3.0).max(1.0);
    let inner_rel = (1e-2 * opts.rel_tol).max(1e-11);
    let inner = Quadrature {
        abs_tol: inner_abs,
        rel_tol: inner_rel,
        max_intervals: 400,
    };
    let evaluations = Cell::new(0usize);
    let inner_ok = Cell::new(true);
    let failure: RefCell<Option<QuadratureError>> = RefCell::new(None);

    let outer_integrand = |p: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match inner.interval_to_roundoff(|c| kernel(p, c), -1.0, 1.0) {
            Ok(r) => {
                evaluations.set(evaluations.get() + r.evaluations);
                if !r.converged {
                    inner_ok.set(false);
                }
                p * p * r.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    let outer = Quadrature {
        abs_tol: opts.tol / (2.0 * PI),
        rel_tol: opts.rel_tol,
        max_intervals: 2000,
    };
    let result = match opts.p_max {
        Some(p_max) => outer.interval(outer_integrand, 0.0, p_max),
        None => outer.semi_infinite(outer_integrand, 0.0, opts.scale),
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = result?;
    Ok(QuadratureResult {
        value: 2.0 * PI * r.value,
        error_estimate: 2.0 * PI * r.error_estimate,
        evaluations: evaluations.get().max(1),
        converged: r.converged && inner_ok.get(),
    })
}
