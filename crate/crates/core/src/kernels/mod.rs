//! Random-feature and neural tangent kernels of ReLU networks and their
//! spectra on the sphere.
//!
//! Sphere convention: `S^d` is the unit sphere of `R^{d+1}`. A zonal kernel
//! `κ(⟨x, y⟩)` on `S^d` acts on degree-`k` spherical harmonics by a scalar
//! `λ_k` with multiplicity `N(d, k)`; see [`spectrum`].

mod gram;
mod kernel;
pub mod spectrum;

pub use gram::{
    gram_matrix, ntk_gram, nystrom_spectrum, nystrom_top, plateaus, sphere_points, GramResult,
    NtkGram, Plateau, SandwichCheck, SandwichReport,
};
pub use kernel::{arccos_kernel, mc_kernel, KernelEstimate, KernelSpec, McKernel, ParamDistribution};
pub use spectrum::{
    exact_eigenvalue, exact_eigenvalue_ln, funk_hecke_eigenvalue, multiplicity, multiplicity_u64,
    printed_x_estimate, projection_tail_bound, relu_coefficient, relu_eigenvalue,
    relu_sphere_profile, x_rate_from_spectrum, DegreeEntry, EigenSource, FunkHecke,
    KernelSpectrum,
};

use thiserror::Error;

use crate::error::ErrorKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("degree k = {k} is not covered by the closed formula (needs k >= 2)")]
    UnsupportedDegree { k: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {index} outside the computed spectrum of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl KernelError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            KernelError::Eigensolver(_) | KernelError::NonFinite(_) => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}
