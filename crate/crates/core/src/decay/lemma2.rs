use std::f64::consts::PI;

use super::DecayError;
use crate::quadrature::{cubic_radial_mass, monte_carlo_6d, ImportanceSampler, MonteCarloResult, QuadratureResult};

/// Truncation radius of the importance sampler.
pub const LEMMA2_TRUNCATION: f64 = 1e4;

/// Smallest sample count accepted by [`lemma2_check`].
pub const MIN_SAMPLES: usize = 100_000;

fn cubic(r: f64) -> f64 {
    (1.0 + r).powi(-3)
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Rigorous bound on the part of
/// `int int (1+|x|)^-3 (1+|y|)^-3 (1+|x-y|)^-3` lying outside the product
/// of two balls of radius `R >= 2`: `512 pi^2 (ln R / 3 + 1/6) / R^3`.
pub fn truncation_bias_bound(radius: f64) -> f64 {
    512.0 * PI * PI * (radius.ln() / 3.0 + 1.0 / 6.0) / radius.powi(3)
}

fn estimate(with_cross_factor: bool, radius: f64, n_samples: usize, seed: u64) -> Result<MonteCarloResult, DecayError> {
    let sampler = ImportanceSampler::CubicDecay { truncation: radius };
    sampler.validate()?;
    let r = if with_cross_factor {
        monte_carlo_6d(
            |x, y| {
                let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
                cubic(norm(x)) * cubic(norm(y)) * cubic(norm(&d))
            },
            &sampler,
            n_samples,
            seed,
        )?
    } else {
        monte_carlo_6d(|x, y| cubic(norm(x)) * cubic(norm(y)), &sampler, n_samples, seed)?
    };
    Ok(r)
}

/// Monte Carlo estimate of
/// `int d^3x d^3y (1+|x|)^-3 (1+|y|)^-3 (1+|x-y|)^-3` on the balls of
/// radius [`LEMMA2_TRUNCATION`]. The reported error adds the truncation
/// bias bound to the standard error.
pub fn lemma2_check(n_samples: usize, seed: u64) -> Result<QuadratureResult, DecayError> {
    if n_samples < MIN_SAMPLES {
        return Err(DecayError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let r = estimate(true, LEMMA2_TRUNCATION, n_samples, seed)?;
    Ok(QuadratureResult {
        error_estimate: r.std_error + truncation_bias_bound(LEMMA2_TRUNCATION),
        ..r.estimate
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Stability {
    pub small: MonteCarloResult,
    pub large: MonteCarloResult,
    /// `|large - small| / sqrt(se_small^2 + se_large^2)`.
    pub separation: f64,
    pub truncation_bias_bound: f64,
}

impl Lemma2Stability {
    pub fn agree(&self) -> bool {
        self.separation <= 3.0
    }
}

/// Two independent estimates at different sample counts. The larger run
/// uses a seed derived from `seed` so the sample streams do not overlap.
pub fn lemma2_stability(n_small: usize, n_large: usize, seed: u64) -> Result<Lemma2Stability, DecayError> {
    if n_small < MIN_SAMPLES || n_large < MIN_SAMPLES {
        return Err(DecayError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples per run, got {n_small} and {n_large}"
        )));
    }
    let small = estimate(true, LEMMA2_TRUNCATION, n_small, seed)?;
    let large = estimate(true, LEMMA2_TRUNCATION, n_large, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let combined = small.std_error.hypot(large.std_error);
    let gap = (large.estimate.value - small.estimate.value).abs();
    Ok(Lemma2Stability {
        small,
        large,
        separation: if combined > 0.0 { gap / combined } else if gap == 0.0 { 0.0 } else { f64::INFINITY },
        truncation_bias_bound: truncation_bias_bound(LEMMA2_TRUNCATION),
    })
}

/// Estimates of the integral with the `(1+|x-y|)^-3` factor removed, along
/// a ladder of truncation radii. Without that factor the integral diverges
/// like `(4 pi ln R)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceLadder {
    pub radii: Vec<f64>,
    pub estimates: Vec<MonteCarloResult>,
    /// Exact truncated value `(4 pi M(R))^2`.
    pub exact: Vec<f64>,
}

impl DivergenceLadder {
    pub fn grows(&self) -> bool {
        self.estimates.windows(2).all(|w| w[1].estimate.value > w[0].estimate.value)
    }
}

pub fn divergence_control(radii: &[f64], n_samples: usize, seed: u64) -> Result<DivergenceLadder, DecayError> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(DecayError::InvalidArgument("need at least two increasing radii".into()));
    }
    let estimates = radii
        .iter()
        .map(|&r| estimate(false, r, n_samples, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let exact = radii.iter().map(|&r| (4.0 * PI * cubic_radial_mass(r)).powi(2)).collect();
    Ok(DivergenceLadder {
        radii: radii.to_vec(),
        estimates,
        exact,
    })
}
