//! Two-layer networks and Barron-space tools.
//!
//! Networks are `f(x) = (1/m) Σ a_i σ(w_i·x + b_i)` (the `1/m` only when
//! `averaged`). The path norm `(1/m) Σ |a_i| (|w_i|_q + |b_i|)` is the finite
//! surrogate of the Barron norm for ReLU; sigmoidal activations use `+1` in
//! place of `|b_i|`.

mod bv;
mod fourier;
mod network;
mod rademacher;

pub use bv::{
    barron_norm_lower_bound_1d, bv_norm_1d, explicit_representation, functional_certificate,
    mc_integration_gap, relu_integral_1d, sample_unit_ball_network, GapReport, PiecewiseLinear,
};
pub use fourier::{fourier_barron_bound, Density, FourierAtom, FourierBound, FourierData};
pub use network::{path_norm, Activation, Neuron, PathNormOrder, TwoLayerNetwork};
pub use rademacher::{
    rademacher_bound, rademacher_estimate, uniform_cube_sample, RademacherConfig, RademacherReport,
};

use thiserror::Error;

use crate::error::ErrorKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BarronError {
    #[error("neuron {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty sample")]
    EmptySample,
    #[error("non-finite value in {context}")]
    NonFinite { context: String },
    #[error("breakpoints must be sorted, distinct and inside (0, 1)")]
    InvalidBreakpoints,
}

impl BarronError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            BarronError::NonFinite { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}
