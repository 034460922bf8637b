//! Special functions shared by the numerics: relativistic dispersion, Fermi
//! occupation factors, modified Bessel functions of the second kind for
//! small integer orders, and alternating-series summation with a rigorous
//! remainder bound.

use thiserror::Error;

/// Exponent magnitude above which exponentials are handled in log space.
pub const LOG_SPACE_THRESHOLD: f64 = 300.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },
    #[error("bessel_k order {0} is not supported (supported: 0, 1, 2, 3)")]
    UnsupportedOrder(u32),
    #[error(
        "alternating series did not reach tolerance {tol:e} within {max_terms} terms \
         (best estimate {best:e}, remainder bound {remainder_bound:e})"
    )]
    NonConvergence {
        best: f64,
        remainder_bound: f64,
        tol: f64,
        max_terms: usize,
    },
}

fn domain(function: &'static str, detail: impl Into<String>) -> SpecFunError {
    SpecFunError::Domain {
        function,
        detail: detail.into(),
    }
}

/// Inverse temperature. `Ground` is the exact zero-temperature sentinel and
/// is never represented by a large finite number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Ground,
}

impl Beta {
    pub fn new(value: f64) -> Result<Self, SpecFunError> {
        if value == f64::INFINITY {
            Ok(Beta::Ground)
        } else if value.is_finite() && value > 0.0 {
            Ok(Beta::Finite(value))
        } else {
            Err(domain("Beta::new", format!("beta must be > 0 or inf, got {value}")))
        }
    }

    /// The value as a float, with `Ground` mapped to `+inf`.
    pub fn value(self) -> f64 {
        match self {
            Beta::Finite(b) => b,
            Beta::Ground => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Beta::Finite(b) => Some(b),
            Beta::Ground => None,
        }
    }

    pub fn is_ground(self) -> bool {
        matches!(self, Beta::Ground)
    }
}

/// Physical inputs of a run, in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    beta: Beta,
    mass: f64,
    charge_e: f64,
    lambda: f64,
    a1: f64,
}

impl ThermalParams {
    pub fn new(beta: f64, mass: f64, charge_e: f64, lambda: f64, a1: f64) -> Result<Self, SpecFunError> {
        let beta = Beta::new(beta)?;
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(domain("ThermalParams::new", format!("mass must be >= 0, got {mass}")));
        }
        if !(charge_e.is_finite() && charge_e > 0.0) {
            return Err(domain("ThermalParams::new", format!("charge must be > 0, got {charge_e}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(domain("ThermalParams::new", format!("lambda must be >= 0, got {lambda}")));
        }
        if !a1.is_finite() {
            return Err(domain("ThermalParams::new", format!("a1 must be finite, got {a1}")));
        }
        Ok(Self {
            beta,
            mass,
            charge_e,
            lambda,
            a1,
        })
    }

    /// `e = 1`, `lambda = 1`, `a1 = 0`.
    pub fn unit_coupling(beta: f64, mass: f64) -> Result<Self, SpecFunError> {
        Self::new(beta, mass, 1.0, 1.0, 0.0)
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn charge_e(&self) -> f64 {
        self.charge_e
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn a1(&self) -> f64 {
        self.a1
    }
}

/// Outcome of a truncated series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub remainder_bound: f64,
}

/// `sqrt(p^2 + m^2)`.
pub fn dispersion(p_mag: f64, mass: f64) -> Result<f64, SpecFunError> {
    if !(p_mag >= 0.0) || !(mass >= 0.0) {
        return Err(domain(
            "dispersion",
            format!("arguments must be non-negative, got p={p_mag}, m={mass}"),
        ));
    }
    Ok(p_mag.hypot(mass))
}

/// `1 / (1 + e^{x})` without overflow for either sign of `x`.
#[inline]
pub(crate) fn logistic_tail(x: f64) -> f64 {
    if x > 0.0 {
        let t = (-x).exp();
        t / (1.0 + t)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Fermi occupation `1 / (1 + e^{beta omega})`.
///
/// `Beta::Ground` gives 0 for `omega > 0`, 1/2 at `omega = 0` and 1 for
/// `omega < 0`.
pub fn fermi_factor(beta: Beta, omega: f64) -> Result<f64, SpecFunError> {
    if omega.is_nan() {
        return Err(domain("fermi_factor", "omega is NaN"));
    }
    match beta {
        Beta::Finite(b) if b > 0.0 => Ok(logistic_tail(b * omega)),
        Beta::Finite(b) => Err(domain("fermi_factor", format!("beta must be > 0, got {b}"))),
        Beta::Ground => Ok(if omega > 0.0 {
            0.0
        } else if omega == 0.0 {
            0.5
        } else {
            1.0
        }),
    }
}

/// Natural log of the Fermi factor, accurate when `beta * omega` is far
/// beyond the range where the factor itself underflows.
pub fn ln_fermi_factor(beta: f64, omega: f64) -> Result<f64, SpecFunError> {
    if !(beta > 0.0) || omega.is_nan() {
        return Err(domain("ln_fermi_factor", format!("beta={beta}, omega={omega}")));
    }
    let x = beta * omega;
    // ln(1/(1+e^x)) = -softplus(x)
    Ok(if x > LOG_SPACE_THRESHOLD {
        -x - (-x).exp().ln_1p()
    } else {
        -x.exp().ln_1p()
    })
}

/// Fermi factor with a finite inverse temperature, no validation.
#[inline]
pub(crate) fn fermi(beta: f64, omega: f64) -> f64 {
    logistic_tail(beta * omega)
}

/// `-d/d omega` of the Fermi factor divided by nothing: `beta n (1 - n)`.
#[inline]
pub(crate) fn fermi_neg_derivative(beta: f64, omega: f64) -> f64 {
    let n = logistic_tail(beta * omega);
    let one_minus = logistic_tail(-beta * omega);
    beta * n * one_minus
}

/// Modified Bessel function of the second kind `K_order(z)` for orders 0..=3.
pub fn bessel_k(order: u32, z: f64) -> Result<f64, SpecFunError> {
    let scaled = bessel_k_scaled(order, z)?;
    Ok(scaled * (-z).exp())
}

/// Exponentially scaled `e^z K_order(z)`, finite for every `z > 0`.
pub fn bessel_k_scaled(order: u32, z: f64) -> Result<f64, SpecFunError> {
    if order > 3 {
        return Err(SpecFunError::UnsupportedOrder(order));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("bessel_k", format!("argument must be finite and > 0, got {z}")));
    }
    let (k0, k1) = if z < 2.0 {
        let (k0, k1) = k01_series(z);
        let s = z.exp();
        (k0 * s, k1 * s)
    } else {
        k01_scaled_continued_fraction(z)
    };
    Ok(match order {
        0 => k0,
        1 => k1,
        _ => {
            let k2 = k0 + 2.0 / z * k1;
            if order == 2 {
                k2
            } else {
                k1 + 4.0 / z * k2
            }
        }
    })
}

/// Power series for K0 and K1 (valid for small z; used below 2).
fn k01_series(z: f64) -> (f64, f64) {
    let y = 0.25 * z * z;
    let ln_half = (0.5 * z).ln();

    // I0 = sum y^k/(k!)^2, K0 = -(ln(z/2)+gamma) I0 + sum y^k/(k!)^2 H_k
    let mut term0 = 1.0;
    let mut i0 = 1.0;
    let mut harm_sum0 = 0.0;
    let mut harmonic = 0.0;
    // I1 = (z/2) sum y^k/(k!(k+1)!),
    // K1 = 1/z + ln(z/2) I1 - (z/4) sum [psi(k+1)+psi(k+2)] y^k/(k!(k+1)!)
    let mut term1 = 1.0;
    let mut i1_sum = 1.0;
    let mut psi_sum1 = -2.0 * EULER_GAMMA + 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term0 *= y / (kf * kf);
        term1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += term0;
        harm_sum0 += term0 * harmonic;
        i1_sum += term1;
        let psi = 2.0 * (harmonic - EULER_GAMMA) + 1.0 / (kf + 1.0);
        psi_sum1 += term1 * psi;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1_sum {
            break;
        }
    }
    let k0 = -(ln_half + EULER_GAMMA) * i0 + harm_sum0;
    let i1 = 0.5 * z * i1_sum;
    let k1 = 1.0 / z + ln_half * i1 - 0.25 * z * psi_sum1;
    (k0, k1)
}

/// Steed's continued fraction for `e^z K0(z)` and `e^z K1(z)`, `z >= 2`.
fn k01_scaled_continued_fraction(z: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (std::f64::consts::PI / (2.0 * z)).sqrt() / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    (k0, k1)
}

/// Sums `sum_j (-1)^j term(j)` until the magnitude of the next term drops
/// to `tol`. The remainder bound is the magnitude of that first omitted
/// term, which is rigorous once the terms decrease monotonically.
pub fn alternating_sum<F>(mut term: F, tol: f64, max_terms: usize) -> Result<SeriesResult, SpecFunError>
where
    F: FnMut(usize) -> f64,
{
    if !(tol > 0.0) {
        return Err(domain("alternating_sum", format!("tol must be > 0, got {tol}")));
    }
    let mut value = 0.0;
    let mut compensation = 0.0;
    let mut last_abs = f64::INFINITY;
    for j in 0..=max_terms {
        let t = term(j);
        if t.is_nan() {
            return Err(domain("alternating_sum", format!("term {j} is NaN")));
        }
        let a = t.abs();
        if a <= tol {
            return Ok(SeriesResult {
                value,
                terms_used: j,
                remainder_bound: a,
            });
        }
        if j == max_terms {
            last_abs = a;
            break;
        }
        let signed = if j % 2 == 0 { t } else { -t };
        // Kahan summation keeps long slowly-converging tails honest.
        let y = signed - compensation;
        let next = value + y;
        compensation = (next - value) - y;
        value = next;
    }
    Err(SpecFunError::NonConvergence {
        best: value,
        remainder_bound: last_abs,
        tol,
        max_terms,
    })
}
