use std::f64::consts::PI;

use super::DecayError;
use crate::quadrature::{Quadrature, TestProfile};
use crate::specfun::{logistic_tail, Beta, ThermalParams};

/// Scalar pieces of the Dirac two-point function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelChannel {
    /// Mass term, weight `m`.
    ScalarMass,
    /// Energy term, weight `omega`.
    TemporalOmega,
    /// Momentum component along the separation, weight `p`.
    SpatialMomentum,
}

impl KernelChannel {
    pub const ALL: [KernelChannel; 3] = [
        KernelChannel::ScalarMass,
        KernelChannel::TemporalOmega,
        KernelChannel::SpatialMomentum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelChannel::ScalarMass => "scalar_m",
            KernelChannel::TemporalOmega => "temporal_omega",
            KernelChannel::SpatialMomentum => "spatial_p",
        }
    }
}

impl std::str::FromStr for KernelChannel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KernelChannel::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown kernel channel '{s}' (expected scalar_m, temporal_omega or spatial_p)"))
    }
}

/// Energy weight of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelWeight {
    /// `e^{-u w}` alone: the kernel bounded term by term in the Fermi
    /// series of the thermal two-point function, and the ground-state
    /// kernel itself.
    Bare,
    /// Both frequency parts of the thermal two-point function:
    /// `(e^{-u w} -+ e^{-(beta - u) w}) / (1 + e^{-beta w})`, with the sum
    /// in the energy channel and the difference in the others. Equal to
    /// `Bare` in the ground state.
    Kms,
}

impl KernelWeight {
    pub fn name(self) -> &'static str {
        match self {
            KernelWeight::Bare => "bare",
            KernelWeight::Kms => "kms",
        }
    }
}

impl std::str::FromStr for KernelWeight {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bare" => Ok(KernelWeight::Bare),
            "kms" => Ok(KernelWeight::Kms),
            other => Err(format!("unknown kernel weight '{other}' (expected bare or kms)")),
        }
    }
}

/// `sin(x)/x`.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Spherical Bessel `j_1(x) = sin x / x^2 - cos x / x`.
fn spherical_j1(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        x / 3.0 - x * x * x / 30.0
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

/// Two-point kernel continued to imaginary time `-i u` at spatial
/// separation `z`:
///
/// ```text
/// 4 pi int_0^inf dp p^2 / (2 w) e^{-u w} f(p) c(p) a(p z)
/// ```
///
/// with `c = m` or `w` and `a = sin(pz)/(pz)`, or `c = p` and `a = j_1(pz)`
/// (the coefficient of `i` of the momentum component along the
/// separation). `u` must lie in `(0, beta)`, or `(0, inf)` in the ground
/// state. See [`thermal_kernel_weighted`] for the Fermi-weighted variant.
pub fn thermal_kernel_imag(
    u: f64,
    z_mag: f64,
    channel: KernelChannel,
    profile: &TestProfile,
    params: &ThermalParams,
    tol: f64,
) -> Result<f64, DecayError> {
    thermal_kernel_weighted(u, z_mag, channel, KernelWeight::Bare, profile, params, tol)
}

/// [`thermal_kernel_imag`] with a choice of energy weight.
///
/// The `Kms` weight makes the kernel decay at the rate
/// `sqrt(m^2 + (pi/beta)^2)` set by the lowest fermionic Matsubara
/// frequency, and its mass and momentum channels vanish at `u = beta/2`.
/// Values more than about 14 orders of magnitude below the kernel at the
/// origin are lost to rounding in the oscillatory integral.
pub fn thermal_kernel_weighted(
    u: f64,
    z_mag: f64,
    channel: KernelChannel,
    weight: KernelWeight,
    profile: &TestProfile,
    params: &ThermalParams,
    tol: f64,
) -> Result<f64, DecayError> {
    let beta = params.beta();
    let inside = match beta {
        Beta::Finite(b) => u > 0.0 && u < b,
        Beta::Ground => u > 0.0 && u.is_finite(),
    };
    if !inside {
        let strip = match beta {
            Beta::Finite(b) => format!("(0, {b})"),
            Beta::Ground => "(0, inf)".to_string(),
        };
        return Err(DecayError::StripViolation { u, strip });
    }
    if !(z_mag >= 0.0 && z_mag.is_finite()) {
        return Err(DecayError::InvalidArgument(format!("separation must be >= 0, got {z_mag}")));
    }
    if !(tol > 0.0) {
        return Err(DecayError::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
    }
    let m = params.mass();
    if channel == KernelChannel::SpatialMomentum && z_mag == 0.0 {
        return Ok(0.0);
    }
    if channel == KernelChannel::ScalarMass && m == 0.0 {
        return Ok(0.0);
    }
    let integrand = |p: f64| {
        let w = p.hypot(m);
        let energy = match (weight, beta) {
            (KernelWeight::Kms, Beta::Finite(b)) => {
                let mirror = (-(b - u) * w).exp();
                let parts = match channel {
                    KernelChannel::TemporalOmega => (-u * w).exp() + mirror,
                    _ => (-u * w).exp() - mirror,
                };
                parts * logistic_tail(-b * w)
            }
            _ => (-u * w).exp(),
        };
        let radial = p * p / (2.0 * w) * energy * profile.f_hat(p);
        let x = p * z_mag;
        radial
            * match channel {
                KernelChannel::ScalarMass => m * sinc(x),
                KernelChannel::TemporalOmega => w * sinc(x),
                KernelChannel::SpatialMomentum => p * spherical_j1(x),
            }
    };
    let p_max = profile.momentum_cutoff();
    // The oscillating integral can be many orders below the integral of
    // its modulus; the absolute floor is set from the latter.
    let modulus = Quadrature::relative(1e-6).interval(|p| integrand(p).abs(), 0.0, p_max)?.value;
    let q = Quadrature {
        abs_tol: 1024.0 * f64::EPSILON * modulus,
        rel_tol: tol,
        max_intervals: 20_000,
    };
    let r = q.interval(integrand, 0.0, p_max)?;
    Ok(4.0 * PI * r.require_converged(tol)?.value)
}
