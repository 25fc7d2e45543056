//! Log-domain Sinkhorn with ε-scaling, used only as an approximate fallback
//! for instances too large for the exact solver.
//!
//! Costs are recomputed on the fly, so memory is linear in the number of atoms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TransportError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinkhornConfig {
    /// Final regularization relative to the largest cost.
    pub rel_epsilon: f64,
    /// Geometric factor between ε stages.
    pub scaling: f64,
    pub max_iters_per_stage: usize,
    /// Stop a stage when the marginal violation (ℓ1) falls below this.
    pub tol: f64,
}

impl Default for SinkhornConfig {
    fn default() -> Self {
        SinkhornConfig { rel_epsilon: 1e-3, scaling: 0.5, max_iters_per_stage: 500, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinkhornResult {
    /// `⟨P, C⟩` for the final entropic plan.
    pub cost: f64,
    pub epsilon: f64,
    pub iterations: usize,
    pub marginal_error: f64,
}

fn logsumexp<I: Iterator<Item = f64>>(it: I) -> f64 {
    let v: Vec<f64> = it.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Entropic transport cost between `a` and `b` under `cost`.
pub fn sinkhorn_cost<C>(a: &[f64], b: &[f64], cost: C, cfg: &SinkhornConfig) -> Result<SinkhornResult, TransportError>
where
    C: Fn(usize, usize) -> f64 + Sync,
{
    let (m, n) = (a.len(), b.len());
    if m == 0 || n == 0 {
        return Err(TransportError::EmptySupport);
    }
    if !(cfg.rel_epsilon > 0.0 && cfg.scaling > 0.0 && cfg.scaling < 1.0) {
        return Err(TransportError::InvalidParameter("sinkhorn needs rel_epsilon > 0 and 0 < scaling < 1".into()));
    }
    let max_cost = (0..m)
        .into_par_iter()
        .map(|i| (0..n).map(|j| cost(i, j)).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max)
        .max(1e-12);
    let log_a: Vec<f64> = a.iter().map(|x| x.ln()).collect();
    let log_b: Vec<f64> = b.iter().map(|x| x.ln()).collect();
    let mut f = vec![0.0; m];
    let mut g = vec![0.0; n];
    let target = cfg.rel_epsilon * max_cost;
    let mut eps = max_cost;
    let mut iterations = 0;
    let mut err = f64::INFINITY;
    loop {
        eps = eps.max(target);
        for _ in 0..cfg.max_iters_per_stage {
            f = (0..m)
                .into_par_iter()
                .map(|i| -eps * logsumexp((0..n).map(|j| (g[j] - cost(i, j)) / eps + log_b[j])))
                .collect();
            g = (0..n)
                .into_par_iter()
                .map(|j| -eps * logsumexp((0..m).map(|i| (f[i] - cost(i, j)) / eps + log_a[i])))
                .collect();
            iterations += 1;
            // after the g-update column marginals are exact; measure rows
            err = (0..m)
                .into_par_iter()
                .map(|i| {
                    let row: f64 = (0..n).map(|j| ((f[i] + g[j] - cost(i, j)) / eps + log_a[i] + log_b[j]).exp()).sum();
                    (row - a[i]).abs()
                })
                .sum();
            if !err.is_finite() {
                return Err(TransportError::Solver("sinkhorn produced non-finite potentials".into()));
            }
            if err < cfg.tol {
                break;
            }
        }
        if eps <= target {
            break;
        }
        eps *= cfg.scaling;
    }
    let total: f64 = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = cost(i, j);
                    ((f[i] + g[j] - c) / eps + log_a[i] + log_b[j]).exp() * c
                })
                .sum::<f64>()
        })
        .sum();
    Ok(SinkhornResult { cost: total, epsilon: eps, iterations, marginal_error: err })
}
