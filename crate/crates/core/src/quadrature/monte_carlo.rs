use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::{QuadratureError, QuadratureResult};

/// Samples per independently seeded block. Block boundaries depend only on
/// the sample count, so the reduction order is fixed.
const BLOCK: usize = 1 << 15;

/// A normalized density on R^3 that can be sampled.
pub trait Sampler3: Sync {
    fn density(&self, x: &[f64; 3]) -> f64;
    fn draw(&self, rng: &mut ChaCha8Rng) -> [f64; 3];
}

/// Importance density for one 3D point; a 6D sample is a pair of
/// independent draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImportanceSampler {
    /// Isotropic normal with standard deviation `sigma` per axis.
    Gaussian { sigma: f64 },
    /// Uniform in a ball.
    UniformBall { radius: f64 },
    /// Density proportional to `(1 + |x|)^-3` on the ball `|x| <= truncation`.
    CubicDecay { truncation: f64 },
}

/// `int_0^R r^2 / (1 + r)^3 dr`.
pub(crate) fn cubic_radial_mass(radius: f64) -> f64 {
    let t = 1.0 + radius;
    t.ln() + 2.0 / t - 0.5 / (t * t) - 1.5
}

impl Sampler3 for ImportanceSampler {
    fn density(&self, x: &[f64; 3]) -> f64 {
        ImportanceSampler::density(self, x)
    }
    fn draw(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        self.sample(rng)
    }
}

impl ImportanceSampler {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok = match *self {
            ImportanceSampler::Gaussian { sigma } => sigma > 0.0 && sigma.is_finite(),
            ImportanceSampler::UniformBall { radius } => radius > 0.0 && radius.is_finite(),
            ImportanceSampler::CubicDecay { truncation } => truncation > 0.0 && truncation.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(QuadratureError::InvalidArgument(format!("invalid sampler {self:?}")))
        }
    }

    /// Normalized density at `x`.
    pub fn density(&self, x: &[f64; 3]) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        match *self {
            ImportanceSampler::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                (2.0 * PI * s2).powf(-1.5) * (-0.5 * r2 / s2).exp()
            }
            ImportanceSampler::UniformBall { radius } => {
                if r2 <= radius * radius {
                    3.0 / (4.0 * PI * radius.powi(3))
                } else {
                    0.0
                }
            }
            ImportanceSampler::CubicDecay { truncation } => {
                let r = r2.sqrt();
                if r <= truncation {
                    (1.0 + r).powi(-3) / (4.0 * PI * cubic_radial_mass(truncation))
                } else {
                    0.0
                }
            }
        }
    }

    fn direction<R: Rng>(rng: &mut R) -> [f64; 3] {
        let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
        let phi = 2.0 * PI * rng.random::<f64>();
        let s = (1.0 - z * z).max(0.0).sqrt();
        [s * phi.cos(), s * phi.sin(), z]
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 3] {
        match *self {
            ImportanceSampler::Gaussian { sigma } => {
                // Box–Muller; three normals from two pairs.
                let mut out = [0.0; 3];
                let mut normals = [0.0; 4];
                for pair in normals.chunks_mut(2) {
                    let u1: f64 = 1.0 - rng.random::<f64>();
                    let u2: f64 = rng.random::<f64>();
                    let rad = (-2.0 * u1.ln()).sqrt();
                    pair[0] = rad * (2.0 * PI * u2).cos();
                    pair[1] = rad * (2.0 * PI * u2).sin();
                }
                for (o, n) in out.iter_mut().zip(normals) {
                    *o = sigma * n;
                }
                out
            }
            ImportanceSampler::UniformBall { radius } => {
                let r = radius * rng.random::<f64>().cbrt();
                let d = Self::direction(rng);
                [r * d[0], r * d[1], r * d[2]]
            }
            ImportanceSampler::CubicDecay { truncation } => {
                let u: f64 = rng.random();
                let r = invert_cubic_radial(u * cubic_radial_mass(truncation), truncation);
                let d = Self::direction(rng);
                [r * d[0], r * d[1], r * d[2]]
            }
        }
    }
}

/// Solves `cubic_radial_mass(r) = target` on `[0, r_max]` by safeguarded Newton.
fn invert_cubic_radial(target: f64, r_max: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, r_max);
    let mut r = (target * 3.0).cbrt().min(r_max);
    for _ in 0..100 {
        let g = cubic_radial_mass(r) - target;
        if g > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let dg = r * r / (1.0 + r).powi(3);
        let mut next = if dg > 0.0 { r - g / dg } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= 1e-15 * r.max(1e-300) {
            return next;
        }
        r = next;
    }
    r
}

/// Monte Carlo estimate with its statistical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    pub estimate: QuadratureResult,
    pub std_error: f64,
    pub samples: usize,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

/// Importance-sampled estimate of `int d^3x d^3y integrand(x, y)`, with `x`
/// and `y` drawn independently from `sampler`. Bit-identical for a fixed
/// `(n_samples, seed)` regardless of thread count.
pub fn monte_carlo_6d<F, S>(
    integrand: F,
    sampler: &S,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloResult, QuadratureError>
where
    F: Fn(&[f64; 3], &[f64; 3]) -> f64 + Sync,
    S: Sampler3,
{
    if n_samples < 2 {
        return Err(QuadratureError::InvalidArgument("need at least two samples".into()));
    }
    let blocks = n_samples.div_ceil(BLOCK);
    let per_block: Vec<Result<Moments, QuadratureError>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BLOCK.min(n_samples - b * BLOCK);
            let mut m = Moments::default();
            for _ in 0..count {
                let x = sampler.draw(&mut rng);
                let y = sampler.draw(&mut rng);
                let v = integrand(&x, &y);
                if !v.is_finite() {
                    return Err(QuadratureError::NonFinite {
                        abscissa: (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt(),
                        value: v,
                    });
                }
                let w = if v == 0.0 {
                    0.0
                } else {
                    let density = sampler.density(&x) * sampler.density(&y);
                    if !(density > 0.0) {
                        return Err(QuadratureError::SamplerMismatch {
                            point: [x[0], x[1], x[2], y[0], y[1], y[2]],
                        });
                    }
                    v / density
                };
                m.push(w);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for m in per_block {
        total = total.merge(m?);
    }
    let variance = total.m2 / (total.n - 1.0);
    let std_error = (variance / total.n).sqrt();
    Ok(MonteCarloResult {
        estimate: QuadratureResult {
            value: total.mean,
            error_estimate: std_error,
            evaluations: n_samples,
            converged: true,
        },
        std_error,
        samples: n_samples,
    })
}
