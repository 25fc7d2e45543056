//! Monte-Carlo estimate of the empirical Rademacher complexity of the Barron
//! unit ball on a fixed sample.
//!
//! The supremum over the ball is a supremum over its extreme points, the signed
//! normalized single neurons, so each sign draw reduces to a nonconvex problem
//! in `(w, b)`. That problem is attacked by multi-start normalized gradient
//! ascent; every evaluated point is a valid lower bound on the supremum.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Activation, BarronError};
use crate::rng::{stream_id, stream_rng, Rng as StreamRng};
use crate::stats::Running;

const DRAW_TAG: u64 = 0x7264_6d72;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RademacherConfig {
    /// Number of sign vectors.
    pub draws: usize,
    /// Random starts per draw, in addition to the fixed starts.
    pub restarts: usize,
    pub steps: usize,
    pub step_size: f64,
}

impl Default for RademacherConfig {
    fn default() -> Self {
        RademacherConfig { draws: 50, restarts: 32, steps: 60, step_size: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RademacherReport {
    pub n: usize,
    pub d: usize,
    /// Best value found per sign draw.
    pub sups: Vec<f64>,
    pub estimate: f64,
    pub std_error: f64,
    /// `2L√(2 ln(2d)/n)`.
    pub bound: f64,
    pub all_below_bound: bool,
    pub seed: u64,
}

/// `2L√(2 ln(2d)/n)`.
pub fn rademacher_bound(lipschitz: f64, d: usize, n: usize) -> f64 {
    2.0 * lipschitz * (2.0 * (2.0 * d as f64).ln() / n as f64).sqrt()
}

struct Problem<'a> {
    x: &'a [Vec<f64>],
    signs: Vec<f64>,
    act: Activation,
}

impl Problem<'_> {
    fn norm(&self, theta: &[f64]) -> f64 {
        let d = theta.len() - 1;
        let w1: f64 = theta[..d].iter().map(|v| v.abs()).sum();
        match self.act {
            Activation::Relu => w1 + theta[d].abs(),
            _ => self.act.neuron_weight(w1, theta[d]),
        }
    }

    /// `(1/n) Σ ξ_i σ(w·x_i + b) / N(w, b)` and its gradient.
    fn value_grad(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let d = theta.len() - 1;
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut val = 0.0;
        for (xi, s) in self.x.iter().zip(&self.signs) {
            let z = xi.iter().zip(&theta[..d]).map(|(a, b)| a * b).sum::<f64>() + theta[d];
            val += s * self.act.eval(z);
            let dz = s * self.act.derivative(z);
            if dz != 0.0 {
                grad[..d].iter_mut().zip(xi).for_each(|(g, x)| *g += dz * x);
                grad[d] += dz;
            }
        }
        let n = self.x.len() as f64;
        let norm = self.norm(theta);
        val /= n * norm;
        // d/dθ of 1/N contributes −val·∂N/N; ∂N/∂w_j = sign(w_j), ∂N/∂b = sign(b) (ReLU only)
        for j in 0..=d {
            grad[j] /= n * norm;
            let dn = if j < d || self.act == Activation::Relu || self.act == Activation::Softplus {
                theta[j].signum() * (theta[j] != 0.0) as u8 as f64
            } else {
                0.0
            };
            grad[j] -= val * dn / norm;
        }
        val
    }

    fn ascend(&self, start: &[f64], sign: f64, cfg: &RademacherConfig) -> f64 {
        let mut theta = start.to_vec();
        let mut grad = vec![0.0; theta.len()];
        let mut best = f64::NEG_INFINITY;
        let mut step = cfg.step_size;
        for _ in 0..=cfg.steps {
            if self.act == Activation::Relu {
                let s = self.norm(&theta);
                if s <= 0.0 {
                    break;
                }
                theta.iter_mut().for_each(|t| *t /= s);
            }
            let v = sign * self.value_grad(&theta, &mut grad);
            if !v.is_finite() {
                break;
            }
            best = best.max(v);
            let gmax = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if gmax == 0.0 {
                break;
            }
            let scale = step * self.norm(&theta).max(1.0) / gmax;
            theta.iter_mut().zip(&grad).for_each(|(t, g)| *t += sign * scale * g);
            step *= 0.95;
        }
        best
    }
}

fn starts(act: Activation, d: usize, restarts: usize, rng: &mut StreamRng) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let unit = |j: usize, v: f64, b: f64| {
        let mut t = vec![0.0; d + 1];
        t[j] = v;
        t[d] = b;
        t
    };
    if act == Activation::Relu {
        // (0, ±1): the constants; (±e_j/2, 1/2): linear functionals, covering the
        // relaxation sup_{|w|_1≤1} w·m; (±e_j, 0): one-sided ramps.
        out.push(unit(0, 0.0, 1.0));
        out.push(unit(0, 0.0, -1.0));
        for j in 0..d {
            for s in [1.0, -1.0] {
                out.push(unit(j, 0.5 * s, 0.5));
                out.push(unit(j, s, 0.0));
            }
        }
    } else {
        for b in [1.0, -1.0, 4.0, -4.0] {
            out.push(unit(0, 0.0, b));
        }
        for j in 0..d {
            for s in [1.0, -1.0] {
                out.push(unit(j, s, 0.0));
                out.push(unit(j, 2.0 * s, 1.0));
            }
        }
    }
    for _ in 0..restarts {
        out.push((0..=d).map(|_| StandardNormal.sample(rng)).collect());
    }
    out
}

/// Estimate `E_ξ sup_{‖f‖ ≤ 1} (1/n) Σ ξ_i f(x_i)` on `sample`.
pub fn rademacher_estimate(
    sample: &[Vec<f64>],
    activation: Activation,
    cfg: &RademacherConfig,
    seed: u64,
) -> Result<RademacherReport, BarronError> {
    let d = sample.first().map(Vec::len).ok_or(BarronError::EmptySample)?;
    if d == 0 {
        return Err(BarronError::InvalidParameter("sample dimension must be positive".into()));
    }
    if let Some((i, p)) = sample.iter().enumerate().find(|(_, p)| p.len() != d) {
        return Err(BarronError::DimensionMismatch { index: i, expected: d, found: p.len() });
    }
    if cfg.draws == 0 {
        return Err(BarronError::InvalidParameter("draws must be >= 1".into()));
    }
    let n = sample.len();
    let sups: Vec<f64> = (0..cfg.draws)
        .into_par_iter()
        .map(|draw| {
            let mut rng = stream_rng(seed, stream_id(&[DRAW_TAG, n as u64, d as u64, draw as u64]));
            let signs: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            let problem = Problem { x: sample, signs, act: activation };
            let mut best = f64::NEG_INFINITY;
            for s in starts(activation, d, cfg.restarts, &mut rng) {
                for sign in [1.0, -1.0] {
                    best = best.max(problem.ascend(&s, sign, cfg));
                }
            }
            if best.is_finite() {
                Ok(best)
            } else {
                Err(BarronError::NonFinite { context: format!("rademacher draw {draw} (n = {n}, d = {d})") })
            }
        })
        .collect::<Result<_, _>>()?;
    let r: Running = sups.iter().copied().collect();
    let bound = rademacher_bound(activation.lipschitz(), d, n);
    Ok(RademacherReport {
        n,
        d,
        all_below_bound: sups.iter().all(|s| *s <= bound),
        estimate: r.mean(),
        std_error: r.std_error(),
        sups,
        bound,
        seed,
    })
}

/// `n` points uniform in `[−1, 1]^d`.
pub fn uniform_cube_sample(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, stream_id(&[0x6375_6265, n as u64, d as u64]));
    (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect()
}
