use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{QuadratureError, QuadratureResult};

// 21-point Kronrod extension of the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadratureError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadratureError::NonFinite { abscissa: x, value: v })
    }
}

/// One Gauss–Kronrod panel: (integral, error estimate, rounding floor of
/// the estimate).
fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64, f64), QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let result = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Ok((result, err, floor))
}

/// Globally adaptive Gauss–Kronrod integrator. Iteration stops once the
/// summed error estimate is below `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Quadrature {
    pub fn absolute(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: 0.0,
            max_intervals: 2000,
        }
    }

    pub fn relative(rel_tol: f64) -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol,
            max_intervals: 2000,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// `int_a^b f`.
    pub fn interval<F>(&self, f: F, a: f64, b: f64) -> Result<QuadratureResult, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        self.adapt(f, a, b, false)
    }

    /// Like [`Quadrature::interval`], but also reports convergence once the
    /// error estimate is pinned at the rounding floor of the integrand's
    /// modulus, for integrals that cancel to far below `int |f|`.
    pub(crate) fn interval_to_roundoff<F>(&self, f: F, a: f64, b: f64) -> Result<QuadratureResult, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        self.adapt(f, a, b, true)
    }

    fn adapt<F>(&self, f: F, a: f64, b: f64, accept_roundoff: bool) -> Result<QuadratureResult, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(QuadratureError::InvalidArgument(format!("bounds must be finite: [{a}, {b}]")));
        }
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(QuadratureError::InvalidArgument("tolerance must be > 0".into()));
        }
        if a == b {
            return Ok(QuadratureResult {
                value: 0.0,
                error_estimate: 0.0,
                evaluations: 1,
                converged: true,
            });
        }
        let done = |value: f64, err: f64, floor: f64| {
            err <= self.target(value) || (accept_roundoff && err <= 2.0 * floor)
        };
        let (v, e, fl) = qk21(&f, a, b)?;
        let mut evaluations = 21;
        let mut total = v;
        let mut total_err = e;
        let mut total_floor = fl;
        let mut heap = BinaryHeap::new();
        heap.push(Segment { a, b, value: v, error: e, floor: fl });
        let mut converged = done(total, total_err, total_floor);
        while !converged && heap.len() < self.max_intervals {
            let seg = heap.pop().expect("heap holds at least one segment");
            let mid = 0.5 * (seg.a + seg.b);
            if !(mid > seg.a.min(seg.b) && mid < seg.a.max(seg.b)) {
                // Interval exhausted at machine resolution.
                heap.push(seg);
                break;
            }
            let (v1, e1, f1) = qk21(&f, seg.a, mid)?;
            let (v2, e2, f2) = qk21(&f, mid, seg.b)?;
            evaluations += 42;
            total += v1 + v2 - seg.value;
            total_err += e1 + e2 - seg.error;
            total_floor += f1 + f2 - seg.floor;
            heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1, floor: f1 });
            heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2, floor: f2 });
            if heap.len() % 64 == 0 {
                // Resum to shed accumulated cancellation in the running totals.
                total = heap.iter().map(|s| s.value).sum();
                total_err = heap.iter().map(|s| s.error).sum();
                total_floor = heap.iter().map(|s| s.floor).sum();
            }
            converged = done(total, total_err, total_floor);
        }
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error_estimate: f64 = heap.iter().map(|s| s.error).sum();
        let floor: f64 = heap.iter().map(|s| s.floor).sum();
        Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations,
            converged: done(value, error_estimate, floor),
        })
    }

    /// `int_a^inf f`, through `x = a + scale * t / (1 - t)`.
    pub fn semi_infinite<F>(&self, f: F, a: f64, scale: f64) -> Result<QuadratureResult, QuadratureError>
    where
        F: Fn(f64) -> f64,
    {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(QuadratureError::InvalidArgument(format!("decay scale must be > 0, got {scale}")));
        }
        let mapped = |t: f64| {
            let one_minus = 1.0 - t;
            let x = a + scale * t / one_minus;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * scale / (one_minus * one_minus)
            }
        };
        match self.interval(mapped, 0.0, 1.0) {
            // Report the physical abscissa, not the mapped one.
            Err(QuadratureError::NonFinite { abscissa, .. }) => {
                let x = a + scale * abscissa / (1.0 - abscissa);
                Err(QuadratureError::NonFinite { abscissa: x, value: f(x) })
            }
            other => other,
        }
    }
}
