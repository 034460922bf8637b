//! Numerical checks of the spatial decay of thermal and ground-state
//! propagator kernels, the connected-graph bound expressions built from
//! them, and the convergence of the three-factor cubic-decay integral.

mod bound;
mod fit;
mod graphs;
mod kernel;
mod lemma2;

use thiserror::Error;

use crate::quadrature::QuadratureError;

pub use bound::{
    exponential_envelope, graph_bound, verify_bound_ratio, BoundKind, BoundReport, BoundRow, KernelConfig, Regime,
    SchedulePoint, SpacetimePoint,
};
pub use fit::{fit_decay, DecayFit, FitModel};
pub use graphs::{enumerate_connected_graphs, Edge, GraphSet, MAX_VERTICES};
pub use kernel::{thermal_kernel_imag, thermal_kernel_weighted, KernelChannel, KernelWeight};
pub use lemma2::{
    divergence_control, lemma2_check, lemma2_stability, truncation_bias_bound, DivergenceLadder, Lemma2Stability,
    LEMMA2_TRUNCATION,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecayError {
    #[error("imaginary-time offset u = {u} outside the analyticity strip {strip}")]
    StripViolation { u: f64, strip: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("fit refused: {0}")]
    FitRefused(String),
    #[error("graph enumeration supports 2..={max} vertices, got {k}")]
    UnsupportedVertexCount { k: usize, max: usize },
    #[error("kernel integral: {0}")]
    Quadrature(#[from] QuadratureError),
}
