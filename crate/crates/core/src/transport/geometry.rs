use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use super::{wrap_unit, Norm, TorusMetricConfig, TransportError};
use crate::rng::{stream_id, stream_rng};
use crate::stats::Running;

/// Volume of the unit ball: `2^d` for ℓ∞, `π^{d/2}/Γ(d/2+1)` for ℓ2.
pub fn unit_ball_volume(d: usize, norm: Norm) -> f64 {
    match norm {
        Norm::LInf => 2f64.powi(d as i32),
        Norm::L2 => {
            let h = d as f64 / 2.0;
            (h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0)).exp()
        }
    }
}

/// `⨍_{B_1} |x| dx = d/(d+1)`, the same for every norm.
pub fn mean_unit_ball_norm(d: usize) -> f64 {
    d as f64 / (d as f64 + 1.0)
}

fn check_dims(n: u64, d: usize) -> Result<(), TransportError> {
    if n == 0 || d == 0 {
        return Err(TransportError::InvalidParameter(format!("need n >= 1 and d >= 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// `d/(d+1) · [(d+1) ω_d]^{-1/d} · n^{-1/d}`: no `n`-point measure is closer
/// than this to Lebesgue measure on the unit cube in W1.
pub fn covering_lower_bound(n: u64, d: usize, metric: TorusMetricConfig) -> Result<f64, TransportError> {
    check_dims(n, d)?;
    let df = d as f64;
    let omega = unit_ball_volume(d, metric.norm);
    Ok(df / (df + 1.0) * ((df + 1.0) * omega * n as f64).powf(-1.0 / df))
}

/// Default `γ_d = (1/4)·(d/(d+1))·[(d+1)ω_d]^{-1/d} / ⨍_{B_1}|x|`, which
/// simplifies to `(1/4)[(d+1)ω_d]^{-1/d}`.
pub fn default_gamma(d: usize, norm: Norm) -> f64 {
    let df = d as f64;
    0.25 * ((df + 1.0) * unit_ball_volume(d, norm)).powf(-1.0 / df)
}

fn check_epsilon(epsilon: f64, metric: TorusMetricConfig) -> Result<(), TransportError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(TransportError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if metric.periodic && epsilon > 0.25 {
        return Err(TransportError::EpsilonTooLarge { epsilon });
    }
    Ok(())
}

/// `|B_ε(0) ∩ B_ε(offset)|`. Exact for both norms: a coordinate product for
/// ℓ∞, twice a spherical cap for ℓ2. Non-periodic balls are not clipped to the
/// cube.
pub fn ball_intersection_volume(offset: &[f64], epsilon: f64, metric: TorusMetricConfig) -> Result<f64, TransportError> {
    check_epsilon(epsilon, metric)?;
    if offset.is_empty() {
        return Err(TransportError::InvalidParameter("empty offset".into()));
    }
    Ok(intersection_unchecked(offset.iter().map(|o| metric.coord_dist(*o, 0.0)), offset.len(), epsilon, metric.norm))
}

fn intersection_unchecked<I: Iterator<Item = f64>>(dists: I, d: usize, epsilon: f64, norm: Norm) -> f64 {
    match norm {
        Norm::LInf => dists.map(|t| (2.0 * epsilon - t).max(0.0)).product(),
        Norm::L2 => {
            let delta2: f64 = dists.map(|t| t * t).sum();
            let r2 = 4.0 * epsilon * epsilon;
            if delta2 >= r2 {
                return 0.0;
            }
            let full = unit_ball_volume(d, Norm::L2) * epsilon.powi(d as i32);
            full * beta_reg((d as f64 + 1.0) / 2.0, 0.5, 1.0 - delta2 / r2)
        }
    }
}

/// `‖Σ_i 1_{B_ε(x_i)}‖²_{L²} = n|B_ε| + Σ_{i≠j} |B_ε(x_i) ∩ B_ε(x_j)|`.
pub fn indicator_sum_l2(centers: &[Vec<f64>], epsilon: f64, metric: TorusMetricConfig) -> Result<f64, TransportError> {
    check_epsilon(epsilon, metric)?;
    let d = centers.first().map(Vec::len).ok_or(TransportError::EmptySupport)?;
    if let Some(c) = centers.iter().find(|c| c.len() != d) {
        return Err(TransportError::DimensionMismatch { left: d, right: c.len() });
    }
    let n = centers.len();
    let vol = unit_ball_volume(d, metric.norm) * epsilon.powi(d as i32);
    let mut cross = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dists = centers[i].iter().zip(&centers[j]).map(|(a, b)| metric.coord_dist(*a, *b));
            cross += intersection_unchecked(dists, d, epsilon, metric.norm);
        }
    }
    Ok(n as f64 * vol + 2.0 * cross)
}

/// L² dual norms of the ball-averaging functional `A_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualNormReport {
    pub n: usize,
    pub epsilon: f64,
    /// `‖Σ 1_{B_i}‖²`.
    pub indicator_sum: f64,
    /// `‖A_n‖ = √S / (n|B_ε|)`.
    pub functional_norm: f64,
    /// `‖A_n − A‖ = √(S/(n|B_ε|)² − 1)` on the torus, `A` the Lebesgue integral.
    pub difference_norm: f64,
}

/// Averages of `φ` over balls of radius `ε_n = γ n^{-1/d}` about each center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothedFunctional {
    pub centers: Vec<Vec<f64>>,
    pub radius: f64,
    pub gamma_d: f64,
    pub metric: TorusMetricConfig,
}

/// Value of a stochastic average with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothedEstimate {
    pub value: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl SmoothedFunctional {
    pub fn new(centers: Vec<Vec<f64>>, gamma_d: f64, metric: TorusMetricConfig) -> Result<Self, TransportError> {
        let d = centers.first().map(Vec::len).ok_or(TransportError::EmptySupport)?;
        if let Some(c) = centers.iter().find(|c| c.len() != d) {
            return Err(TransportError::DimensionMismatch { left: d, right: c.len() });
        }
        if let Some(x) = centers.iter().flatten().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(TransportError::InvalidPoint(format!("coordinate {x} outside [0, 1)")));
        }
        if !(gamma_d.is_finite() && gamma_d > 0.0) {
            return Err(TransportError::InvalidParameter(format!("gamma must be positive, got {gamma_d}")));
        }
        let radius = gamma_d * (centers.len() as f64).powf(-1.0 / d as f64);
        check_epsilon(radius, metric)?;
        Ok(SmoothedFunctional { centers, radius, gamma_d, metric })
    }

    /// Uses [`default_gamma`].
    pub fn with_default_gamma(centers: Vec<Vec<f64>>, metric: TorusMetricConfig) -> Result<Self, TransportError> {
        let d = centers.first().map(Vec::len).ok_or(TransportError::EmptySupport)?;
        Self::new(centers, default_gamma(d, metric.norm), metric)
    }

    pub fn dim(&self) -> usize {
        self.centers[0].len()
    }

    /// Point-evaluation average `(1/n) Σ φ(x_i)`.
    pub fn point_average<F: Fn(&[f64]) -> f64>(&self, phi: F) -> f64 {
        self.centers.iter().map(|c| phi(c)).collect::<Running>().mean()
    }

    /// Monte-Carlo estimate of `(1/n) Σ ⨍_{B_ε(x_i)} φ`, with `quadrature_points`
    /// uniform samples per ball. Periodic balls wrap; non-periodic sample
    /// points are passed to `φ` unclipped.
    pub fn apply<F: Fn(&[f64]) -> f64>(&self, phi: F, quadrature_points: usize, seed: u64) -> Result<SmoothedEstimate, TransportError> {
        if quadrature_points == 0 {
            return Err(TransportError::InvalidParameter("quadrature_points must be >= 1".into()));
        }
        let d = self.dim();
        let mut means = Running::new();
        let mut var_sum = 0.0;
        let mut x = vec![0.0; d];
        for (i, c) in self.centers.iter().enumerate() {
            let mut rng = stream_rng(seed, stream_id(&[0x5300, i as u64]));
            let mut acc = Running::new();
            for _ in 0..quadrature_points {
                sample_ball(&mut rng, self.metric.norm, self.radius, &mut x);
                for (xk, ck) in x.iter_mut().zip(c) {
                    *xk += ck;
                    if self.metric.periodic {
                        *xk = wrap_unit(*xk);
                    }
                }
                acc.push(phi(&x));
            }
            means.push(acc.mean());
            var_sum += acc.variance() / quadrature_points as f64;
        }
        let n = self.centers.len() as f64;
        Ok(SmoothedEstimate { value: means.mean(), std_error: var_sum.sqrt() / n, seed })
    }

    /// Exact L² dual norms of this functional.
    pub fn dual_norms(&self) -> Result<DualNormReport, TransportError> {
        let d = self.dim();
        let n = self.centers.len();
        let s = indicator_sum_l2(&self.centers, self.radius, self.metric)?;
        let mass = n as f64 * unit_ball_volume(d, self.metric.norm) * self.radius.powi(d as i32);
        let ratio = s / (mass * mass);
        Ok(DualNormReport {
            n,
            epsilon: self.radius,
            indicator_sum: s,
            functional_norm: ratio.sqrt(),
            difference_norm: (ratio - 1.0).max(0.0).sqrt(),
        })
    }
}

/// `√(1 + 1/(ω_d γ^d))`: the value `‖A_n‖` concentrates around for
/// independent uniform centers with `ε_n = γ n^{-1/d}`.
pub fn dual_norm_constant(d: usize, gamma: f64, norm: Norm) -> f64 {
    (1.0 + 1.0 / (unit_ball_volume(d, norm) * gamma.powi(d as i32))).sqrt()
}

/// Uniform sample from the centered ball of radius `r`, written into `out`.
pub(crate) fn sample_ball<R: Rng + ?Sized>(rng: &mut R, norm: Norm, r: f64, out: &mut [f64]) {
    match norm {
        Norm::LInf => out.iter_mut().for_each(|x| *x = r * (2.0 * rng.random::<f64>() - 1.0)),
        Norm::L2 => {
            let mut s = 0.0;
            for x in out.iter_mut() {
                *x = StandardNormal.sample(rng);
                s += *x * *x;
            }
            let scale = r * rng.random::<f64>().powf(1.0 / out.len() as f64) / s.sqrt();
            out.iter_mut().for_each(|x| *x *= scale);
        }
    }
}
