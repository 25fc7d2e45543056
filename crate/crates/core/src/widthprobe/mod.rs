//! Measured widths: how well path-norm-constrained ReLU networks approximate
//! a target in `L²([0,1]^d)`.
//!
//! The optimizer only ever produces upper bounds on the best error at a given
//! budget, so every comparison against a certified lower bound is one-sided.

mod fit;

pub use fit::{
    abs_kink_target, fit_constrained, lipschitz_certificate, project_to_budget, rho_curve,
    CertificateCheck, CurveSample, FitConfig, FitResult, WidthCurve,
};

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barron::TwoLayerNetwork;
use crate::error::ErrorKind;
use crate::quadrature::gauss_legendre;
use crate::rng::{stream_id, stream_rng};
use crate::stats::Running;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: target has {target}, got {found}")]
    DimensionMismatch { target: usize, found: usize },
    #[error("all {restarts} restarts failed: {diagnostics}")]
    OptimizationFailed { restarts: usize, diagnostics: String },
    #[error("quadrature set of {points} points exceeds the limit {limit}")]
    QuadratureTooLarge { points: usize, limit: usize },
}

impl ProbeError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ProbeError::OptimizationFailed { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}

pub type TargetFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Function on `[0,1]^d` to approximate.
#[derive(Clone)]
pub enum TargetFunction {
    /// `x ↦ min_i |x − p_i|_∞`, exactly 1-Lipschitz.
    DistanceToPointSet { points: Vec<Vec<f64>> },
    /// An explicit network.
    BarronExplicit(TwoLayerNetwork),
    Custom {
        name: String,
        dim: usize,
        lipschitz: f64,
        f: TargetFn,
    },
}

impl std::fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetFunction::DistanceToPointSet { points } => write!(f, "DistanceToPointSet({} points)", points.len()),
            TargetFunction::BarronExplicit(n) => write!(f, "BarronExplicit(width {})", n.width()),
            TargetFunction::Custom { name, dim, .. } => write!(f, "Custom({name}, d = {dim})"),
        }
    }
}

impl TargetFunction {
    pub fn distance_to_points(points: Vec<Vec<f64>>) -> Result<Self, ProbeError> {
        let d = points.first().map(Vec::len).filter(|d| *d > 0).ok_or_else(|| ProbeError::InvalidParameter("empty point set".into()))?;
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(ProbeError::DimensionMismatch { target: d, found: p.len() });
        }
        Ok(TargetFunction::DistanceToPointSet { points })
    }

    /// Distance to `k` uniform random points in `[0,1]^d`.
    pub fn random_distance(d: usize, k: usize, seed: u64) -> Result<Self, ProbeError> {
        let mut rng = stream_rng(seed, stream_id(&[0x7467_7473, d as u64, k as u64]));
        Self::distance_to_points((0..k).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect())
    }

    pub fn barron(net: TwoLayerNetwork) -> Result<Self, ProbeError> {
        if net.dim().is_none() {
            return Err(ProbeError::InvalidParameter("target network has no neurons".into()));
        }
        Ok(TargetFunction::BarronExplicit(net))
    }

    pub fn dim(&self) -> usize {
        match self {
            TargetFunction::DistanceToPointSet { points } => points[0].len(),
            TargetFunction::BarronExplicit(net) => net.dim().unwrap_or(0),
            TargetFunction::Custom { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TargetFunction::DistanceToPointSet { points } => points
                .iter()
                .map(|p| p.iter().zip(x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
                .fold(f64::INFINITY, f64::min),
            TargetFunction::BarronExplicit(net) => net.eval(x),
            TargetFunction::Custom { f, .. } => f(x),
        }
    }

    /// Declared Lipschitz constant with respect to `|·|_∞`.
    pub fn lipschitz_constant(&self) -> f64 {
        match self {
            TargetFunction::DistanceToPointSet { .. } => 1.0,
            TargetFunction::BarronExplicit(net) => {
                let l = net.activation.lipschitz();
                net.scale() * net.neurons.iter().map(|n| n.a.abs() * l * n.w.iter().map(|w| w.abs()).sum::<f64>()).sum::<f64>()
            }
            TargetFunction::Custom { lipschitz, .. } => *lipschitz,
        }
    }

    /// Largest observed `|φ(x) − φ(y)| / |x − y|_∞` over `pairs` random pairs,
    /// and whether it stays within the declared constant plus 1e−9.
    pub fn verify_lipschitz(&self, pairs: usize, seed: u64) -> (f64, bool) {
        let d = self.dim();
        let mut rng = stream_rng(seed, stream_id(&[0x6c69_7073, d as u64]));
        let mut worst = 0.0f64;
        for _ in 0..pairs {
            let x: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            // half the pairs are close, to probe local slopes
            let r = if rng.random::<bool>() { 1.0 } else { 1e-3 };
            let y: Vec<f64> = x.iter().map(|v| (v + r * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0)).collect();
            let dist = x.iter().zip(&y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if dist > 0.0 {
                worst = worst.max((self.eval(&x) - self.eval(&y)).abs() / dist);
            }
        }
        (worst, worst <= self.lipschitz_constant() + 1e-9)
    }
}

/// How `∫_{[0,1]^d} g` is approximated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadratureSpec {
    /// `points` iid uniform samples.
    MonteCarlo { points: usize },
    /// Tensor composite Gauss–Legendre: `panels` per axis, `order` nodes each.
    Grid { panels: usize, order: usize },
}

/// Largest quadrature set built.
pub const MAX_QUADRATURE: usize = 4_000_000;

/// Quadrature nodes and weights on `[0,1]^d` (weights sum to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSet {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub stochastic: bool,
}

impl QuadratureSet {
    pub fn build(spec: QuadratureSpec, dim: usize, seed: u64) -> Result<Self, ProbeError> {
        if dim == 0 {
            return Err(ProbeError::InvalidParameter("dimension must be positive".into()));
        }
        match spec {
            QuadratureSpec::MonteCarlo { points } => {
                if !(2..=MAX_QUADRATURE).contains(&points) {
                    return Err(ProbeError::QuadratureTooLarge { points, limit: MAX_QUADRATURE });
                }
                let mut rng = stream_rng(seed, stream_id(&[0x7175_6164, dim as u64, points as u64]));
                let pts = (0..points).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect();
                Ok(QuadratureSet { dim, points: pts, weights: vec![1.0 / points as f64; points], stochastic: true })
            }
            QuadratureSpec::Grid { panels, order } => {
                let per_axis = panels.checked_mul(order).filter(|p| *p > 0).ok_or_else(|| ProbeError::InvalidParameter("empty grid".into()))?;
                let total = (per_axis as u64).checked_pow(dim as u32).filter(|t| *t <= MAX_QUADRATURE as u64);
                let total = total.ok_or(ProbeError::QuadratureTooLarge { points: usize::MAX, limit: MAX_QUADRATURE })? as usize;
                let (x, w) = gauss_legendre(order);
                let h = 1.0 / panels as f64;
                let mut nodes = Vec::with_capacity(per_axis);
                let mut wts = Vec::with_capacity(per_axis);
                for p in 0..panels {
                    for (xi, wi) in x.iter().zip(&w) {
                        nodes.push((p as f64 + 0.5 * (xi + 1.0)) * h);
                        wts.push(0.5 * wi * h);
                    }
                }
                let mut points = Vec::with_capacity(total);
                let mut weights = Vec::with_capacity(total);
                for idx in 0..total {
                    let mut rem = idx;
                    let mut pt = Vec::with_capacity(dim);
                    let mut wt = 1.0;
                    for _ in 0..dim {
                        pt.push(nodes[rem % per_axis]);
                        wt *= wts[rem % per_axis];
                        rem /= per_axis;
                    }
                    points.push(pt);
                    weights.push(wt);
                }
                Ok(QuadratureSet { dim, points, weights, stochastic: false })
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A quadrature value with its standard error (zero for deterministic grids).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// `∫ (f − φ)²` on a prepared quadrature set.
pub fn l2_error_on(net: &TwoLayerNetwork, target: &TargetFunction, quad: &QuadratureSet) -> Result<L2Estimate, ProbeError> {
    if let Some(d) = net.dim() {
        if d != target.dim() {
            return Err(ProbeError::DimensionMismatch { target: target.dim(), found: d });
        }
    }
    if quad.dim != target.dim() {
        return Err(ProbeError::DimensionMismatch { target: target.dim(), found: quad.dim });
    }
    if quad.stochastic {
        let r: Running = quad.points.iter().map(|x| (net.eval(x) - target.eval(x)).powi(2)).collect();
        Ok(L2Estimate { value: r.mean(), std_error: r.std_error() })
    } else {
        let v = quad.points.iter().zip(&quad.weights).map(|(x, w)| w * (net.eval(x) - target.eval(x)).powi(2)).sum();
        Ok(L2Estimate { value: v, std_error: 0.0 })
    }
}

/// `∫_{[0,1]^d} (f_Θ − φ)² dx` by the given quadrature.
pub fn l2_error(net: &TwoLayerNetwork, target: &TargetFunction, quadrature: QuadratureSpec, seed: u64) -> Result<L2Estimate, ProbeError> {
    let quad = QuadratureSet::build(quadrature, target.dim(), seed)?;
    l2_error_on(net, target, &quad)
}
