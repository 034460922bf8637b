//! Radial inverse 3D Fourier transform of an isotropic function,
//! `A(r) = 1/(2 pi^2 r) int_0^inf p sin(p r) f(p) dp`.
//!
//! The integral is split at the zeros `k pi / r` of the sine. Each
//! half-period is integrated adaptively and the alternating partial sums
//! are accelerated by repeated averaging (Euler transformation).

use rayon::prelude::*;
use std::f64::consts::PI;

use super::{Quadrature, QuadratureError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTransformOptions {
    /// Relative tolerance of each transformed value.
    pub rel_tol: f64,
    /// Give up after this many half-periods.
    pub max_panels: usize,
    /// Number of averaging levels in the Euler step.
    pub euler_levels: usize,
}

impl SineTransformOptions {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            max_panels: 200_000,
            euler_levels: 24,
        }
    }
}

/// Repeated pairwise averaging of the last `levels + 1` partial sums.
fn euler_average(partial: &[f64], levels: usize) -> (f64, f64) {
    let levels = levels.min(partial.len() - 1);
    let mut row: Vec<f64> = partial[partial.len() - levels - 1..].to_vec();
    let mut spread = f64::INFINITY;
    while row.len() > 1 {
        if row.len() == 2 {
            spread = (row[1] - row[0]).abs() * 0.5;
        }
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    (row[0], spread)
}

fn check_decay<F: Fn(f64) -> f64>(f_hat: &F) -> Result<(), QuadratureError> {
    let (p1, p2) = (1e3, 1e5);
    let g1 = p1 * f_hat(p1).abs();
    let g2 = p2 * f_hat(p2).abs();
    if !(g1.is_finite() && g2.is_finite()) {
        return Err(QuadratureError::NonDecaying(format!(
            "f_hat is not finite at large momentum (p f(p) = {g1:e} at {p1:e}, {g2:e} at {p2:e})"
        )));
    }
    if g1 > 0.0 && g2 > 0.5 * g1 {
        return Err(QuadratureError::NonDecaying(format!(
            "p f(p) does not fall off: {g1:e} at p = {p1:e}, {g2:e} at p = {p2:e}; \
             need f(p) = O(p^-2)"
        )));
    }
    Ok(())
}

fn transform_one<F: Fn(f64) -> f64>(f_hat: &F, r: f64, opts: &SineTransformOptions) -> Result<f64, QuadratureError> {
    let half_period = PI / r;
    let panel_rule = Quadrature {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_intervals: 200,
    };
    let integrand = |p: f64| p * (p * r).sin() * f_hat(p);

    let mut partial = Vec::with_capacity(256);
    let mut running = 0.0;
    let mut max_term: f64 = 0.0;
    let mut max_partial: f64 = 0.0;
    let mut last_estimate: Option<f64> = None;
    let check_every = 8;
    let mut k = 0usize;
    while k < opts.max_panels {
        for _ in 0..check_every {
            let a = k as f64 * half_period;
            let b = a + half_period;
            let term = panel_rule.interval(integrand, a, b)?.value;
            running += term;
            partial.push(running);
            max_term = max_term.max(term.abs());
            max_partial = max_partial.max(running.abs());
            k += 1;
        }
        if max_term == 0.0 && k >= 2 * check_every {
            return Ok(0.0);
        }
        let recent = partial.len();
        let tail_small = (0..check_every).all(|i| {
            let idx = recent - 1 - i;
            let term = if idx == 0 { partial[0] } else { partial[idx] - partial[idx - 1] };
            term.abs() <= 1e-3 * max_term
        });
        let (estimate, spread) = euler_average(&partial, opts.euler_levels);
        let floor = 64.0 * f64::EPSILON * max_partial.max(max_term);
        if tail_small {
            if let Some(prev) = last_estimate {
                let target = (opts.rel_tol * estimate.abs()).max(floor);
                if (estimate - prev).abs() <= target && spread <= target.max(floor) {
                    return Ok(estimate / (2.0 * PI * PI * r));
                }
            }
            last_estimate = Some(estimate);
        }
    }
    let (estimate, spread) = euler_average(&partial, opts.euler_levels);
    Err(QuadratureError::NotConverged {
        value: estimate / (2.0 * PI * PI * r),
        error: spread / (2.0 * PI * PI * r),
        tol: opts.rel_tol,
    })
}

/// Radial inverse Fourier transform of `f_hat` evaluated at each radius in
/// `r_grid`, each to relative tolerance `tol` (or the roundoff floor set by
/// the size of the oscillating partial sums, whichever is larger).
pub fn sine_transform_radial<F>(f_hat: F, r_grid: &[f64], tol: f64) -> Result<Vec<f64>, QuadratureError>
where
    F: Fn(f64) -> f64 + Sync,
{
    sine_transform_radial_with(f_hat, r_grid, SineTransformOptions::new(tol))
}

pub fn sine_transform_radial_with<F>(
    f_hat: F,
    r_grid: &[f64],
    opts: SineTransformOptions,
) -> Result<Vec<f64>, QuadratureError>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(opts.rel_tol > 0.0) {
        return Err(QuadratureError::InvalidArgument("tolerance must be > 0".into()));
    }
    if let Some(&bad) = r_grid.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
        return Err(QuadratureError::InvalidArgument(format!("radius must be > 0, got {bad}")));
    }
    check_decay(&f_hat)?;
    r_grid.par_iter().map(|&r| transform_one(&f_hat, r, &opts)).collect()
}
