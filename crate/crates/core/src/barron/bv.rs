//! One-dimensional Barron norms of piecewise-linear functions on `[0, 1]`,
//! and the uniform Monte-Carlo integration gap.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Activation, BarronError, Neuron, PathNormOrder, TwoLayerNetwork};

/// Continuous piecewise-linear function on `[0, 1]` given by its knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    /// Strictly increasing, first 0 and last 1.
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, BarronError> {
        if xs.len() < 2 || xs.len() != ys.len() || xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
            return Err(BarronError::InvalidBreakpoints);
        }
        if xs.windows(2).any(|p| !(p[1] > p[0])) || ys.iter().any(|y| !y.is_finite()) {
            return Err(BarronError::InvalidBreakpoints);
        }
        Ok(PiecewiseLinear { xs, ys })
    }

    /// `f(0) = value0`, `f'(0+) = slope0`, and slope jumps `(t, jump)` with
    /// `t ∈ (0, 1)` strictly increasing.
    pub fn from_slopes(value0: f64, slope0: f64, kinks: &[(f64, f64)]) -> Result<Self, BarronError> {
        if kinks.iter().any(|(t, _)| !(*t > 0.0 && *t < 1.0)) || kinks.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(BarronError::InvalidBreakpoints);
        }
        let mut xs = vec![0.0];
        let mut ys = vec![value0];
        let mut slope = slope0;
        let mut x = 0.0;
        let mut y = value0;
        for &(t, jump) in kinks.iter().chain(std::iter::once(&(1.0, 0.0))) {
            y += slope * (t - x);
            x = t;
            xs.push(t);
            ys.push(y);
            slope += jump;
        }
        Self::new(xs, ys)
    }

    /// The restriction to `[0, 1]` of a one-dimensional ReLU network.
    pub fn from_network(net: &TwoLayerNetwork) -> Result<Self, BarronError> {
        if net.activation != Activation::Relu {
            return Err(BarronError::InvalidParameter("only ReLU networks are piecewise linear".into()));
        }
        if net.dim().is_some_and(|d| d != 1) {
            return Err(BarronError::InvalidParameter("network must be one-dimensional".into()));
        }
        let mut xs: Vec<f64> = net
            .neurons
            .iter()
            .filter(|n| n.w[0] != 0.0)
            .map(|n| -n.b / n.w[0])
            .filter(|t| *t > 0.0 && *t < 1.0)
            .collect();
        xs.push(0.0);
        xs.push(1.0);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let ys = xs.iter().map(|x| net.eval(&[*x])).collect();
        Self::new(xs, ys)
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.xs.windows(2).zip(self.ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|t| *t <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1, y0, y1) = (self.xs[k - 1], self.xs[k], self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// `|f(0)| + |f'(0+)| + Σ |slope jumps|`.
pub fn bv_norm_1d(f: &PiecewiseLinear) -> f64 {
    let s = f.slopes();
    f.ys[0].abs() + s[0].abs() + s.windows(2).map(|p| (p[1] - p[0]).abs()).sum::<f64>()
}

/// `f = f(0)·σ(1) + f'(0)·σ(x) + Σ_t c_t σ(x − t)` as a (non-averaged) ReLU
/// network; its path norm is `|f(0)| + |f'(0)| + Σ |c_t| (1 + t)`.
pub fn explicit_representation(f: &PiecewiseLinear) -> TwoLayerNetwork {
    let s = f.slopes();
    let mut neurons = vec![Neuron::new(f.ys[0], vec![0.0], 1.0), Neuron::new(s[0], vec![1.0], 0.0)];
    for (k, pair) in s.windows(2).enumerate() {
        let t = f.xs[k + 1];
        neurons.push(Neuron::new(pair[1] - pair[0], vec![1.0], -t));
    }
    TwoLayerNetwork { activation: Activation::Relu, averaged: false, neurons }
}

/// `L(f) = 2 f'(1−) − f(1) + f(0)`. Every normalized neuron
/// `σ(wx + b)/(|w| + |b|)` has `|L| ≤ 1` on `[0, 1]`, so `|L(f)|` is a lower
/// bound on the Barron norm.
pub fn functional_certificate(f: &PiecewiseLinear) -> f64 {
    let s = f.slopes();
    2.0 * s[s.len() - 1] - f.ys[f.ys.len() - 1] + f.ys[0]
}

/// Lower bound on the Barron norm on `[0, 1]`: the largest of `|L(f)|`, the
/// Lipschitz constant and `sup |f|`, each of which is at most `|w| + |b|` on
/// every normalized neuron.
pub fn barron_norm_lower_bound_1d(f: &PiecewiseLinear) -> f64 {
    let lip = f.slopes().iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let sup = f.ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    functional_certificate(f).abs().max(lip).max(sup)
}

/// Exact `∫_lo^hi f` for a one-dimensional ReLU network.
pub fn relu_integral_1d(net: &TwoLayerNetwork, lo: f64, hi: f64) -> Result<f64, BarronError> {
    if net.activation != Activation::Relu || net.dim().is_some_and(|d| d != 1) {
        return Err(BarronError::InvalidParameter("need a one-dimensional ReLU network".into()));
    }
    if !(lo < hi) {
        return Err(BarronError::InvalidParameter(format!("empty interval [{lo}, {hi}]")));
    }
    let mut xs: Vec<f64> = net
        .neurons
        .iter()
        .filter(|n| n.w[0] != 0.0)
        .map(|n| -n.b / n.w[0])
        .filter(|t| *t > lo && *t < hi)
        .collect();
    xs.push(lo);
    xs.push(hi);
    xs.sort_by(f64::total_cmp);
    Ok(xs.windows(2).map(|p| 0.5 * (p[1] - p[0]) * (net.eval(&[p[0]]) + net.eval(&[p[1]]))).sum())
}

/// Random non-averaged network with `m` neurons and path norm exactly 1:
/// Gaussian directions normalized per neuron, outer weights with random signs
/// and magnitudes summing to one.
pub fn sample_unit_ball_network<R: Rng + ?Sized>(rng: &mut R, d: usize, m: usize, activation: Activation) -> TwoLayerNetwork {
    let mags: Vec<f64> = (0..m).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = mags.iter().sum();
    let neurons = mags
        .iter()
        .map(|mag| {
            let w: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let b: f64 = StandardNormal.sample(rng);
            let weight = activation.neuron_weight(PathNormOrder::L1.norm(&w), b);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            Neuron::new(sign * mag / total / weight, w, b)
        })
        .collect();
    TwoLayerNetwork { activation, averaged: false, neurons }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    /// `|(1/n) Σ φ(x_i) − ∫ φ|` for each network.
    pub gaps: Vec<f64>,
    pub sup: f64,
    pub argmax: usize,
}

/// Largest Monte-Carlo integration error over `nets` on `sample`, against
/// `reference(net) = ∫ net`.
pub fn mc_integration_gap<F>(nets: &[TwoLayerNetwork], sample: &[Vec<f64>], reference: F) -> Result<GapReport, BarronError>
where
    F: Fn(&TwoLayerNetwork) -> Result<f64, BarronError>,
{
    if sample.is_empty() {
        return Err(BarronError::EmptySample);
    }
    let n = sample.len() as f64;
    let mut gaps = Vec::with_capacity(nets.len());
    for net in nets {
        let mc = sample.iter().map(|x| net.eval(x)).sum::<f64>() / n;
        gaps.push((mc - reference(net)?).abs());
    }
    let (argmax, sup) = gaps.iter().copied().enumerate().fold((0, 0.0), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
    Ok(GapReport { gaps, sup, argmax })
}
