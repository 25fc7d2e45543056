//! Empirical-measure machinery on the unit cube and flat torus.
//!
//! * [`w1_exact`] solves discrete optimal transport exactly with a network
//!   simplex; [`w1_auto`] falls back to entropic Sinkhorn for instances too
//!   large to hold every arc, and says so in its result.
//! * [`covering_lower_bound`] is the ball-covering lower bound on
//!   `W1(Lebesgue, n-point measure)`.
//! * [`SmoothedFunctional`], [`ball_intersection_volume`] and
//!   [`indicator_sum_l2`] cover the ball-averaged evaluation functionals and
//!   their L² dual norms.
//! * [`empirical_w1_rate`] runs the seeded convergence-rate experiment.

mod geometry;
mod rate;
pub mod simplex;
pub mod sinkhorn;

pub use geometry::{
    ball_intersection_volume, covering_lower_bound, default_gamma, dual_norm_constant,
    indicator_sum_l2, mean_unit_ball_norm, unit_ball_volume, DualNormReport, SmoothedEstimate,
    SmoothedFunctional,
};
pub use rate::{empirical_w1_rate, RateConfig, RateReport, RateRow, RateTrial};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ErrorKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("measure has empty support")]
    EmptySupport,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("epsilon {epsilon} too large for the periodic interpretation (need <= 1/4)")]
    EpsilonTooLarge { epsilon: f64 },
    #[error("grid of {points} points exceeds the limit {limit}")]
    GridTooLarge { points: u64, limit: u64 },
    #[error("transport solver failed: {0}")]
    Solver(String),
}

impl TransportError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            TransportError::Solver(_) => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}

/// Norm used for point distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    #[default]
    LInf,
    L2,
}

impl std::str::FromStr for Norm {
    type Err = TransportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linf" | "l_inf" | "ell_inf" | "inf" => Ok(Norm::LInf),
            "l2" | "ell_2" | "2" => Ok(Norm::L2),
            other => Err(TransportError::InvalidParameter(format!("unknown norm {other:?}"))),
        }
    }
}

/// Metric on `[0,1)^d`: a norm, optionally with per-coordinate wraparound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TorusMetricConfig {
    pub norm: Norm,
    pub periodic: bool,
}

impl TorusMetricConfig {
    pub fn new(norm: Norm, periodic: bool) -> Self {
        TorusMetricConfig { norm, periodic }
    }

    /// Per-coordinate distance, wrapped when periodic.
    #[inline]
    pub fn coord_dist(&self, x: f64, y: f64) -> f64 {
        let d = (x - y).abs();
        if self.periodic {
            d.min(1.0 - d)
        } else {
            d
        }
    }

    #[inline]
    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.norm {
            Norm::LInf => x.iter().zip(y).fold(0.0, |m, (a, b)| m.max(self.coord_dist(*a, *b))),
            Norm::L2 => x
                .iter()
                .zip(y)
                .map(|(a, b)| {
                    let d = self.coord_dist(*a, *b);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// Weighted point cloud in `[0,1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, TransportError> {
        let dim = points.first().map(Vec::len).ok_or(TransportError::EmptySupport)?;
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(TransportError::DimensionMismatch { left: dim, right: p.len() });
        }
        Self::from_flat(dim, points.concat(), weights)
    }

    /// Equal weights `1/n`.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self, TransportError> {
        let n = points.len();
        Self::new(points, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self, TransportError> {
        if dim == 0 {
            return Err(TransportError::InvalidParameter("dimension must be positive".into()));
        }
        if weights.is_empty() {
            return Err(TransportError::EmptySupport);
        }
        if coords.len() != dim * weights.len() {
            return Err(TransportError::InvalidWeights(format!(
                "{} coordinates for {} weights in dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        if let Some(x) = coords.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(TransportError::InvalidPoint(format!("coordinate {x} outside [0, 1)")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(TransportError::InvalidWeights(format!("weight {w} is not a finite nonnegative value")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(TransportError::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { dim, coords, weights })
    }

    /// Cell-centred tensor grid with `resolution^d` atoms of equal weight.
    pub fn grid(dim: usize, resolution: usize) -> Result<Self, TransportError> {
        if dim == 0 || resolution == 0 {
            return Err(TransportError::InvalidParameter("grid needs positive dimension and resolution".into()));
        }
        let count = (resolution as u64)
            .checked_pow(dim as u32)
            .filter(|c| *c <= GRID_LIMIT)
            .ok_or(TransportError::GridTooLarge { points: u64::MAX, limit: GRID_LIMIT })? as usize;
        let mut coords = Vec::with_capacity(count * dim);
        let h = 1.0 / resolution as f64;
        for idx in 0..count {
            let mut rem = idx;
            for _ in 0..dim {
                coords.push(((rem % resolution) as f64 + 0.5) * h);
                rem /= resolution;
            }
        }
        Self::from_flat(dim, coords, vec![1.0 / count as f64; count])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Shift every point by `offset` modulo 1.
    pub fn translate(&self, offset: &[f64]) -> Result<Self, TransportError> {
        if offset.len() != self.dim {
            return Err(TransportError::DimensionMismatch { left: self.dim, right: offset.len() });
        }
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(offset).map(|(x, o)| wrap_unit(x + o)))
            .collect();
        Ok(DiscreteMeasure { dim: self.dim, coords, weights: self.weights.clone() })
    }
}

/// Largest tensor grid accepted (`resolution^d`).
pub const GRID_LIMIT: u64 = 1_000_000;

/// Largest number of arcs (`|supp μ|·|supp ν|`) solved exactly by [`w1_auto`].
pub const EXACT_ARC_LIMIT: usize = 1 << 22;

/// `x mod 1` in `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// W1 value plus how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct W1Value {
    pub value: f64,
    /// True when computed by entropic regularization rather than exactly.
    pub approximate: bool,
}

fn check_pair(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<(), TransportError> {
    if mu.dim != nu.dim {
        return Err(TransportError::DimensionMismatch { left: mu.dim, right: nu.dim });
    }
    Ok(())
}

/// Atoms with positive mass: (indices, weights).
fn support(m: &DiscreteMeasure) -> (Vec<usize>, Vec<f64>) {
    m.weights.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(i, w)| (i, *w)).unzip()
}

/// Exact W1 between two discrete measures.
pub fn w1_exact(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    metric: TorusMetricConfig,
) -> Result<f64, TransportError> {
    Ok(w1_exact_solution(mu, nu, metric)?.cost)
}

/// Exact W1 with the optimal plan and dual potentials (indices refer to the
/// positive-mass atoms, in order).
pub fn w1_exact_solution(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    metric: TorusMetricConfig,
) -> Result<simplex::TransportSolution, TransportError> {
    check_pair(mu, nu)?;
    let (ia, a) = support(mu);
    let (ib, b) = support(nu);
    simplex::solve_transport(&a, &b, |i, j| metric.dist(mu.point(ia[i]), nu.point(ib[j])))
}

/// Exact W1 when the arc count is at most [`EXACT_ARC_LIMIT`], otherwise a
/// flagged Sinkhorn approximation.
pub fn w1_auto(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    metric: TorusMetricConfig,
) -> Result<W1Value, TransportError> {
    check_pair(mu, nu)?;
    if mu.len().saturating_mul(nu.len()) <= EXACT_ARC_LIMIT {
        return Ok(W1Value { value: w1_exact(mu, nu, metric)?, approximate: false });
    }
    let (ia, a) = support(mu);
    let (ib, b) = support(nu);
    let res = sinkhorn::sinkhorn_cost(&a, &b, |i, j| metric.dist(mu.point(ia[i]), nu.point(ib[j])), &Default::default())?;
    Ok(W1Value { value: res.cost, approximate: true })
}

/// W1 between two measures on the real line via the CDF formula
/// `∫ |F_μ − F_ν|`, non-periodic. Used as an independent oracle.
pub fn w1_line(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64, TransportError> {
    if mu.dim != 1 || nu.dim != 1 {
        return Err(TransportError::DimensionMismatch { left: mu.dim, right: 1 });
    }
    let mut events: Vec<(f64, f64)> = mu
        .coords
        .iter()
        .zip(&mu.weights)
        .map(|(x, w)| (*x, *w))
        .chain(nu.coords.iter().zip(&nu.weights).map(|(x, w)| (*x, -*w)))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cdf_gap = 0.0;
    for pair in events.windows(2) {
        cdf_gap += pair[0].1;
        total += cdf_gap.abs() * (pair[1].0 - pair[0].0);
    }
    Ok(total)
}
