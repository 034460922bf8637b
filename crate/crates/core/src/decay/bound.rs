use rayon::prelude::*;

use super::fit::{fit_decay, FitModel};
use super::graphs::{enumerate_connected_graphs, GraphSet};
use super::kernel::{thermal_kernel_weighted, KernelChannel, KernelWeight};
use super::DecayError;
use crate::quadrature::TestProfile;
use crate::specfun::ThermalParams;

/// Imaginary time `u` and spatial position `z` of one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub u: f64,
    pub z: [f64; 3],
}

impl SpacetimePoint {
    pub fn spatial(z: [f64; 3]) -> Self {
        Self { u: 0.0, z }
    }
}

/// Distance used in the per-edge factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Spatial distance `|z_s - z_r|` (thermal state).
    ThermalSpatial,
    /// Euclidean distance `sqrt((u_s - u_r)^2 + |z_s - z_r|^2)` (ground state).
    GroundSpacetime,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::ThermalSpatial => "thermal_spatial",
            Regime::GroundSpacetime => "ground_spacetime",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thermal_spatial" => Ok(Regime::ThermalSpatial),
            "ground_spacetime" => Ok(Regime::GroundSpacetime),
            other => Err(format!("unknown regime '{other}' (expected thermal_spatial or ground_spacetime)")),
        }
    }
}

/// Exponential for massive fields, cubic power law for massless ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Exponential,
    Polynomial,
}

fn distance(a: &SpacetimePoint, b: &SpacetimePoint, regime: Regime) -> f64 {
    let dz = ((a.z[0] - b.z[0]).powi(2) + (a.z[1] - b.z[1]).powi(2) + (a.z[2] - b.z[2]).powi(2)).sqrt();
    match regime {
        Regime::ThermalSpatial => dz,
        Regime::GroundSpacetime => (a.u - b.u).hypot(dz),
    }
}

fn edge_factor(d: f64, mass: f64) -> f64 {
    if mass > 0.0 {
        (-mass * d).exp()
    } else {
        (1.0 + d).powi(-3)
    }
}

/// `sum_G prod_{edges} factor(d_edge)` over `graphs`, where vertex 0 is the
/// origin and vertices `1..` are `points`. The factor is `(1 + d)^-3` for
/// `mass = 0` and `exp(-mass d)` otherwise.
pub fn graph_bound(
    points: &[SpacetimePoint],
    mass: f64,
    graphs: &GraphSet,
    regime: Regime,
) -> Result<f64, DecayError> {
    if points.len() + 1 != graphs.vertex_count {
        return Err(DecayError::InvalidArgument(format!(
            "{} points plus the origin do not match graphs on {} vertices",
            points.len(),
            graphs.vertex_count
        )));
    }
    if !(mass >= 0.0) {
        return Err(DecayError::InvalidArgument(format!("mass must be >= 0, got {mass}")));
    }
    let origin = SpacetimePoint { u: 0.0, z: [0.0; 3] };
    let vertex = |i: usize| if i == 0 { origin } else { points[i - 1] };
    let k = graphs.vertex_count;
    let mut factor = vec![vec![0.0; k]; k];
    for s in 0..k {
        for r in s + 1..k {
            factor[s][r] = edge_factor(distance(&vertex(s), &vertex(r), regime), mass);
        }
    }
    Ok(graphs
        .graphs
        .iter()
        .map(|edges| edges.iter().map(|e| factor[e.source][e.range]).product::<f64>())
        .sum())
}

/// `exp(-(m / sqrt(n)) r_e)` with `r_e = sqrt(sum_i |z_i|^2)` over the `n`
/// points.
pub fn exponential_envelope(points: &[SpacetimePoint], mass: f64) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let r_e = points.iter().map(|p| p.z.iter().map(|c| c * c).sum::<f64>()).sum::<f64>().sqrt();
    (-(mass / (points.len() as f64).sqrt()) * r_e).exp()
}

/// Kernel evaluated by [`verify_bound_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub channel: KernelChannel,
    pub weight: KernelWeight,
    pub profile: TestProfile,
    pub params: ThermalParams,
    pub tol: f64,
}

/// Imaginary time and separation of one schedule entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulePoint {
    pub u: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    /// `z` (thermal) or `sqrt(u^2 + z^2)` (ground).
    pub r: f64,
    pub u: f64,
    pub z: f64,
    pub kernel: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub regime: Regime,
    pub rows: Vec<BoundRow>,
    /// Radii left out because the bound or the kernel vanished there.
    pub excluded: Vec<f64>,
    pub sup_ratio: f64,
    /// Slope of `ln(ratio)` against `r`.
    pub trend_slope: f64,
}

impl BoundReport {
    pub const MAX_TREND: f64 = 0.01;

    pub fn bounded(&self) -> bool {
        self.sup_ratio.is_finite() && self.trend_slope <= Self::MAX_TREND
    }
}

/// `|kernel| / bound` along a schedule, with the two-vertex graph bound
/// (single edge from the origin) as denominator.
pub fn verify_bound_ratio(
    kernel: &KernelConfig,
    regime: Regime,
    schedule: &[SchedulePoint],
) -> Result<BoundReport, DecayError> {
    let graphs = enumerate_connected_graphs(2)?;
    let mass = kernel.params.mass();
    let kind = if mass > 0.0 {
        BoundKind::Exponential
    } else {
        BoundKind::Polynomial
    };
    let evaluated: Vec<(SchedulePoint, f64, f64)> = schedule
        .par_iter()
        .map(|s| {
            let v = thermal_kernel_weighted(
                s.u,
                s.z,
                kernel.channel,
                kernel.weight,
                &kernel.profile,
                &kernel.params,
                kernel.tol,
            )?;
            let point = SpacetimePoint { u: s.u, z: [0.0, 0.0, s.z] };
            let b = graph_bound(&[point], mass, &graphs, regime)?;
            Ok((*s, v, b))
        })
        .collect::<Result<_, DecayError>>()?;
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for (s, v, b) in evaluated {
        let r = match regime {
            Regime::ThermalSpatial => s.z,
            Regime::GroundSpacetime => s.u.hypot(s.z),
        };
        if b == 0.0 || v == 0.0 {
            excluded.push(r);
            continue;
        }
        rows.push(BoundRow {
            r,
            u: s.u,
            z: s.z,
            kernel: v,
            bound: b,
            ratio: v.abs() / b,
        });
    }
    let sup_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let trend = fit_decay(
        &rows.iter().map(|r| (r.r, r.ratio)).collect::<Vec<_>>(),
        FitModel::LogLinear,
    )?;
    Ok(BoundReport {
        kind,
        regime,
        rows,
        excluded,
        sup_ratio,
        trend_slope: trend.slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_points_count_graphs() {
        for k in 2..=5 {
            let g = enumerate_connected_graphs(k).unwrap();
            let pts = vec![SpacetimePoint::spatial([0.0; 3]); k - 1];
            assert_eq!(graph_bound(&pts, 0.0, &g, Regime::ThermalSpatial).unwrap(), g.len() as f64);
        }
    }

    #[test]
    fn single_edge() {
        let g = enumerate_connected_graphs(2).unwrap();
        let p = [SpacetimePoint::spatial([1.0, 0.0, 0.0])];
        assert_eq!(graph_bound(&p, 0.0, &g, Regime::ThermalSpatial).unwrap(), 0.125);
        assert!((graph_bound(&p, 2.0, &g, Regime::ThermalSpatial).unwrap() - (-2.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn three_vertices_by_hand() {
        let g = enumerate_connected_graphs(3).unwrap();
        let p = [SpacetimePoint::spatial([1.0, 0.0, 0.0]), SpacetimePoint::spatial([0.0, 1.0, 0.0])];
        let a = 0.125;
        let c = (1.0 + 2f64.sqrt()).powi(-3);
        // Three two-edge paths and the triangle.
        let want = a * a + a * c + a * c + a * a * c;
        assert!((graph_bound(&p, 0.0, &g, Regime::ThermalSpatial).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn ground_uses_spacetime_distance() {
        let g = enumerate_connected_graphs(2).unwrap();
        let p = [SpacetimePoint { u: 3.0, z: [4.0, 0.0, 0.0] }];
        assert_eq!(graph_bound(&p, 0.0, &g, Regime::GroundSpacetime).unwrap(), 1.0 / 216.0);
    }

    #[test]
    fn envelope() {
        let p = [SpacetimePoint::spatial([3.0, 0.0, 0.0]), SpacetimePoint::spatial([0.0, 4.0, 0.0])];
        let want = (-(1.0 / 2f64.sqrt()) * 5.0).exp();
        assert!((exponential_envelope(&p, 1.0) - want).abs() < 1e-15);
    }

    #[test]
    fn mismatched_vertices() {
        let g = enumerate_connected_graphs(3).unwrap();
        assert!(graph_bound(&[SpacetimePoint::spatial([0.0; 3])], 0.0, &g, Regime::ThermalSpatial).is_err());
    }
}
