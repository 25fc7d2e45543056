use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ProbeError, QuadratureSet, QuadratureSpec, TargetFunction};
use crate::barron::{rademacher_bound, Activation, Neuron, PathNormOrder, TwoLayerNetwork};
use crate::rng::{stream_id, stream_rng};
use crate::separation::{SeparationParams, WidthBound};
use crate::stats::LineFit;
use crate::transport::{covering_lower_bound, default_gamma, dual_norm_constant, Norm, TorusMetricConfig};

/// Optimizer settings for [`fit_constrained`] and [`rho_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    pub restarts: usize,
    pub steps: usize,
    pub learning_rate: f64,
    /// Learning rate is multiplied by `decay` every `decay_every` steps.
    pub decay_every: usize,
    pub decay: f64,
    /// Renormalize inner weights to unit `ℓ¹` norm every this many steps (0 = never).
    pub normalize_every: usize,
    /// Iterations of the final convex refit of the outer weights (0 = off).
    pub polish_iters: usize,
    pub quadrature: QuadratureSpec,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            restarts: 8,
            steps: 2000,
            learning_rate: 0.01,
            decay_every: 500,
            decay: 0.5,
            normalize_every: 1,
            polish_iters: 500,
            quadrature: QuadratureSpec::MonteCarlo { points: 4096 },
        }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<(), ProbeError> {
        let bad = |m: &str| Err(ProbeError::InvalidParameter(m.into()));
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(self.decay.is_finite() && self.decay > 0.0 && self.decay <= 1.0) || self.decay_every == 0 {
            return bad("decay must lie in (0, 1] with a positive period");
        }
        Ok(())
    }
}

/// Best network found at one budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub net: TwoLayerNetwork,
    /// `‖f − φ‖_{L²}` on the quadrature set.
    pub error: f64,
    /// `∫ (f − φ)²` on the quadrature set.
    pub sq_error: f64,
    /// Standard error of `error` (delta method; zero on grids).
    pub error_se: f64,
    pub path_norm: f64,
    pub best_restart: usize,
    pub failed_restarts: usize,
}

/// Scale every outer weight so that the path norm is at most `t`.
///
/// ReLU is positively homogeneous, so this is the radial projection onto
/// the budget ball; it is the identity when the budget already holds.
pub fn project_to_budget(net: &mut TwoLayerNetwork, t: f64) {
    let p = net.path_norm(PathNormOrder::L1);
    if p > t {
        net.scale_outer(if p > 0.0 { t / p } else { 0.0 });
    }
}

struct Params {
    d: usize,
    a: Vec<f64>,
    w: Vec<f64>,
    b: Vec<f64>,
}

impl Params {
    fn m(&self) -> usize {
        self.a.len()
    }

    fn inner(&self, i: usize) -> f64 {
        self.w[i * self.d..(i + 1) * self.d].iter().map(|v| v.abs()).sum::<f64>() + self.b[i].abs()
    }

    fn path(&self) -> f64 {
        (0..self.m()).map(|i| self.a[i].abs() * self.inner(i)).sum()
    }

    fn project(&mut self, t: f64) {
        let p = self.path();
        if p > t {
            let s = if p > 0.0 { t / p } else { 0.0 };
            self.a.iter_mut().for_each(|a| *a *= s);
        }
    }

    /// `(a, w, b) → (sa, w/s, b/s)` with `|w|_1 + |b| = 1` afterwards, so
    /// the path norm is `Σ|a_i|` and inner updates never touch the budget.
    fn normalize(&mut self) {
        for i in 0..self.m() {
            let s = self.inner(i);
            if s > 0.0 {
                let lambda = 1.0 / s;
                self.a[i] *= s;
                self.w[i * self.d..(i + 1) * self.d].iter_mut().for_each(|w| *w *= lambda);
                self.b[i] *= lambda;
            }
        }
    }

    fn to_network(&self) -> TwoLayerNetwork {
        let neurons = (0..self.m())
            .map(|i| Neuron::new(self.a[i], self.w[i * self.d..(i + 1) * self.d].to_vec(), self.b[i]))
            .collect();
        TwoLayerNetwork { activation: Activation::Relu, averaged: false, neurons }
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    step: i32,
}

impl Adam {
    fn new(n: usize) -> Self {
        Adam { m: vec![0.0; n], v: vec![0.0; n], step: 0 }
    }

    fn update(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]], lr: f64) {
        const B1: f64 = 0.9;
        const B2: f64 = 0.999;
        self.step += 1;
        let c1 = 1.0 - B1.powi(self.step);
        let c2 = 1.0 - B2.powi(self.step);
        let mut k = 0;
        for (p, g) in params.iter_mut().zip(grads) {
            for (x, gi) in p.iter_mut().zip(g.iter()) {
                self.m[k] = B1 * self.m[k] + (1.0 - B1) * gi;
                self.v[k] = B2 * self.v[k] + (1.0 - B2) * gi * gi;
                *x -= lr * (self.m[k] / c1) / ((self.v[k] / c2).sqrt() + 1e-12);
                k += 1;
            }
        }
    }
}

struct Problem<'a> {
    quad: &'a QuadratureSet,
    targets: Vec<f64>,
    /// Flattened quadrature points, row-major.
    xs: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(target: &TargetFunction, quad: &'a QuadratureSet) -> Self {
        Problem {
            targets: quad.points.iter().map(|x| target.eval(x)).collect(),
            xs: quad.points.concat(),
            quad,
        }
    }

    /// Loss `Σ_j ω_j (f(x_j) − φ(x_j))²` and, when asked, its gradient.
    fn loss(&self, p: &Params, grad: Option<(&mut [f64], &mut [f64], &mut [f64])>) -> f64 {
        let d = p.d;
        let m = p.m();
        let n = self.targets.len();
        let mut pre = vec![0.0; m];
        let mut residual = vec![0.0; n];
        let mut loss = 0.0;
        for j in 0..n {
            let x = &self.xs[j * d..(j + 1) * d];
            let mut f = 0.0;
            for i in 0..m {
                let z = p.w[i * d..(i + 1) * d].iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + p.b[i];
                pre[i] = z;
                if z > 0.0 {
                    f += p.a[i] * z;
                }
            }
            let r = f - self.targets[j];
            loss += self.quad.weights[j] * r * r;
            residual[j] = 2.0 * self.quad.weights[j] * r;
        }
        if let Some((ga, gw, gb)) = grad {
            ga.fill(0.0);
            gw.fill(0.0);
            gb.fill(0.0);
            for j in 0..n {
                let x = &self.xs[j * d..(j + 1) * d];
                let r = residual[j];
                if r == 0.0 {
                    continue;
                }
                for i in 0..m {
                    let z = p.w[i * d..(i + 1) * d].iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + p.b[i];
                    if z > 0.0 {
                        ga[i] += r * z;
                        let s = r * p.a[i];
                        gw[i * d..(i + 1) * d].iter_mut().zip(x).for_each(|(g, x)| *g += s * x);
                        gb[i] += s;
                    }
                }
            }
        }
        loss
    }

    fn initial(&self, m: usize, t: f64, seed: u64, restart: usize) -> Params {
        let d = self.quad.dim;
        let mut rng = stream_rng(seed, stream_id(&[0x696e_6974, restart as u64, m as u64]));
        let mut w = vec![0.0; m * d];
        let mut b = vec![0.0; m];
        for i in 0..m {
            let wi = &mut w[i * d..(i + 1) * d];
            wi.iter_mut().for_each(|v| *v = StandardNormal.sample(&mut rng));
            // kink through a random point of the cube
            b[i] = -wi.iter().map(|v| v * rng.random::<f64>()).sum::<f64>();
        }
        let a = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal) / m as f64).collect();
        let mut p = Params { d, a, w, b };
        p.normalize();
        p.project(t);
        p
    }

    fn run(&self, m: usize, t: f64, cfg: &FitConfig, seed: u64, restart: usize) -> Option<(Params, f64)> {
        let mut p = self.initial(m, t, seed, restart);
        let d = p.d;
        let mut best_loss = self.loss(&p, None);
        if !best_loss.is_finite() {
            return None;
        }
        let mut best = (p.a.clone(), p.w.clone(), p.b.clone());
        let (mut ga, mut gw, mut gb) = (vec![0.0; m], vec![0.0; m * d], vec![0.0; m]);
        let mut adam = Adam::new(m * (d + 2));
        let mut lr = cfg.learning_rate;
        for step in 0..cfg.steps {
            if step > 0 && step % cfg.decay_every == 0 {
                lr *= cfg.decay;
            }
            let loss = self.loss(&p, Some((&mut ga, &mut gw, &mut gb)));
            if !loss.is_finite() {
                return None;
            }
            if loss < best_loss {
                best_loss = loss;
                best = (p.a.clone(), p.w.clone(), p.b.clone());
            }
            adam.update(&mut [&mut p.a, &mut p.w, &mut p.b], &[&ga, &gw, &gb], lr);
            if cfg.normalize_every > 0 && (step + 1) % cfg.normalize_every == 0 {
                p.normalize();
            }
            p.project(t);
        }
        let last = self.loss(&p, None);
        let (mut p, mut loss) = if last.is_finite() && last < best_loss {
            (p, last)
        } else {
            let (a, w, b) = best;
            (Params { d, a, w, b }, best_loss)
        };
        p.normalize();
        let a = self.polish_outer(&p, t, cfg.polish_iters);
        let old = std::mem::replace(&mut p.a, a);
        let polished = self.loss(&p, None);
        if polished.is_finite() && polished <= loss {
            loss = polished;
        } else {
            p.a = old;
        }
        Some((p, loss))
    }

    /// Accelerated projected gradient on the outer weights alone, with the
    /// inner weights fixed at unit `ℓ¹` norm. The problem is convex: a
    /// quadratic over the `ℓ¹` ball of radius `t`.
    fn polish_outer(&self, p: &Params, t: f64, iters: usize) -> Vec<f64> {
        let m = p.m();
        let d = p.d;
        if iters == 0 || m == 0 {
            return p.a.clone();
        }
        // normal equations: G = Φᵀ diag(ω) Φ, c = Φᵀ diag(ω) y
        let mut g = vec![0.0; m * m];
        let mut c = vec![0.0; m];
        let mut phi = vec![0.0; m];
        for j in 0..self.targets.len() {
            let x = &self.xs[j * d..(j + 1) * d];
            let om = self.quad.weights[j];
            for i in 0..m {
                let z = p.w[i * d..(i + 1) * d].iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + p.b[i];
                phi[i] = z.max(0.0);
            }
            for i in 0..m {
                if phi[i] == 0.0 {
                    continue;
                }
                c[i] += om * phi[i] * self.targets[j];
                let row = &mut g[i * m..(i + 1) * m];
                for k in 0..m {
                    row[k] += om * phi[i] * phi[k];
                }
            }
        }
        let matvec = |v: &[f64], out: &mut [f64]| {
            for i in 0..m {
                out[i] = g[i * m..(i + 1) * m].iter().zip(v).map(|(a, b)| a * b).sum();
            }
        };
        // largest eigenvalue by power iteration
        let mut v = vec![1.0 / (m as f64).sqrt(); m];
        let mut gv = vec![0.0; m];
        let mut lmax = 0.0;
        for _ in 0..50 {
            matvec(&v, &mut gv);
            let n = gv.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n == 0.0 {
                return p.a.clone();
            }
            lmax = n;
            v.iter_mut().zip(&gv).for_each(|(v, g)| *v = g / n);
        }
        let step = 1.0 / (2.0 * lmax * 1.01);
        let mut a = p.a.clone();
        let mut y = a.clone();
        let mut theta = 1.0f64;
        for _ in 0..iters {
            matvec(&y, &mut gv);
            let mut next: Vec<f64> = y.iter().zip(&gv).zip(&c).map(|((y, g), c)| y - step * 2.0 * (g - c)).collect();
            project_l1(&mut next, t);
            let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
            let mom = (theta - 1.0) / theta_next;
            y = next.iter().zip(&a).map(|(n, a)| n + mom * (n - a)).collect();
            a = next;
            theta = theta_next;
        }
        a
    }

    fn fit(&self, target: &TargetFunction, t: f64, m: usize, cfg: &FitConfig, seed: u64) -> Result<FitResult, ProbeError> {
        if t == 0.0 {
            let net = TwoLayerNetwork::zero(Activation::Relu);
            return Ok(self.result(target, net, 0, 0));
        }
        let runs: Vec<Option<(Params, f64)>> =
            (0..cfg.restarts).into_par_iter().map(|r| self.run(m, t, cfg, seed, r)).collect();
        let failed = runs.iter().filter(|r| r.is_none()).count();
        let (best_restart, best) = runs
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| r.map(|r| (i, r)))
            .min_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
            .ok_or_else(|| ProbeError::OptimizationFailed {
                restarts: cfg.restarts,
                diagnostics: format!("non-finite loss at t = {t}, width {m}"),
            })?;
        let mut net = best.0.to_network();
        project_to_budget(&mut net, t);
        Ok(self.result(target, net, best_restart, failed))
    }

    fn result(&self, target: &TargetFunction, net: TwoLayerNetwork, best_restart: usize, failed: usize) -> FitResult {
        let est = super::l2_error_on(&net, target, self.quad).expect("dimensions checked on entry");
        let error = est.value.max(0.0).sqrt();
        let error_se = if error > 0.0 { est.std_error / (2.0 * error) } else { est.std_error.sqrt() };
        FitResult {
            path_norm: net.path_norm(PathNormOrder::L1),
            net,
            error,
            sq_error: est.value,
            error_se,
            best_restart,
            failed_restarts: failed,
        }
    }
}

/// Euclidean projection onto `{a : Σ|a_i| ≤ t}`.
fn project_l1(a: &mut [f64], t: f64) {
    let total: f64 = a.iter().map(|x| x.abs()).sum();
    if total <= t {
        return;
    }
    let mut mags: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &u) in mags.iter().enumerate() {
        cum += u;
        let cand = (cum - t) / (k + 1) as f64;
        if u > cand {
            tau = cand;
        } else {
            break;
        }
    }
    a.iter_mut().for_each(|x| *x = x.signum() * (x.abs() - tau).max(0.0));
}

fn check_budget(t: f64) -> Result<(), ProbeError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(ProbeError::InvalidParameter(format!("budget must be nonnegative, got {t}")))
    }
}

/// Best-of-restarts ReLU network of width `m` with path norm at most `t`.
///
/// `t = 0` returns the zero network.
pub fn fit_constrained(target: &TargetFunction, t: f64, m: usize, cfg: &FitConfig, seed: u64) -> Result<FitResult, ProbeError> {
    check_budget(t)?;
    if m == 0 {
        return Err(ProbeError::InvalidParameter("width must be positive".into()));
    }
    cfg.validate()?;
    let quad = QuadratureSet::build(cfg.quadrature, target.dim(), seed)?;
    Problem::new(target, &quad).fit(target, t, m, cfg, seed)
}

/// One point of a measured width curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub error: f64,
    pub error_se: f64,
    pub sq_error: f64,
    pub path_norm: f64,
    /// Index of the budget whose network is reported (earlier budgets are
    /// feasible here, so the curve takes the best of them).
    pub source: usize,
    pub best_restart: usize,
    pub failed_restarts: usize,
    /// Error of the network fitted at this budget itself, before taking the
    /// best over smaller budgets.
    pub fitted_error: f64,
    pub fitted_error_se: f64,
    #[serde(skip)]
    pub net: Option<TwoLayerNetwork>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthCurve {
    pub dim: usize,
    pub width: usize,
    pub config: FitConfig,
    pub seed: u64,
    pub samples: Vec<CurveSample>,
    /// Log-log fit of error against `t` over the upper half of the grid.
    pub fit: Option<LineFit>,
    /// `−2/(d−2)` for `d > 2`.
    pub reference_exponent: Option<f64>,
}

impl WidthCurve {
    pub fn is_monotone(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].error <= w[0].error)
    }

    pub fn all_finite(&self) -> bool {
        self.samples.iter().all(|s| s.error.is_finite() && s.error >= 0.0)
    }
}

/// Width curve over an increasing budget grid.
///
/// Budgets are fitted concurrently on one shared quadrature set; a network
/// found at a smaller budget is feasible at every larger one, so each sample
/// reports the best network over budgets up to its own. The curve is therefore
/// exactly nonincreasing.
pub fn rho_curve(target: &TargetFunction, t_grid: &[f64], m: usize, cfg: &FitConfig, seed: u64) -> Result<WidthCurve, ProbeError> {
    if t_grid.is_empty() {
        return Err(ProbeError::InvalidParameter("empty budget grid".into()));
    }
    for &t in t_grid {
        check_budget(t)?;
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ProbeError::InvalidParameter("budget grid must be strictly increasing".into()));
    }
    if m == 0 {
        return Err(ProbeError::InvalidParameter("width must be positive".into()));
    }
    cfg.validate()?;
    let quad = QuadratureSet::build(cfg.quadrature, target.dim(), seed)?;
    let problem = Problem::new(target, &quad);
    let fits: Vec<FitResult> = t_grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| problem.fit(target, t, m, cfg, seed ^ stream_id(&[0x6375_7276, i as u64])))
        .collect::<Result<_, _>>()?;

    let mut samples: Vec<CurveSample> = Vec::with_capacity(fits.len());
    let mut best = 0;
    for (i, (f, &t)) in fits.iter().zip(t_grid).enumerate() {
        if f.sq_error < fits[best].sq_error {
            best = i;
        }
        let src = &fits[best];
        samples.push(CurveSample {
            t,
            error: src.error,
            error_se: src.error_se,
            sq_error: src.sq_error,
            path_norm: src.path_norm,
            source: best,
            best_restart: src.best_restart,
            failed_restarts: f.failed_restarts,
            fitted_error: f.error,
            fitted_error_se: f.error_se,
            net: Some(src.net.clone()),
        });
    }
    let upper = &samples[samples.len() / 2..];
    let (ts, es): (Vec<f64>, Vec<f64>) = upper.iter().map(|s| (s.t, s.error)).unzip();
    let d = target.dim();
    Ok(WidthCurve {
        dim: d,
        width: m,
        config: *cfg,
        seed,
        fit: LineFit::fit_loglog(&ts, &es),
        reference_exponent: (d > 2).then(|| -2.0 / (d as f64 - 2.0)),
        samples,
    })
}

/// `|x − 1/2|` on `[0, 1]` as the network `relu(x − 1/2) + relu(1/2 − x)`.
///
/// Its path norm 3 is also the least budget: a unit-norm neuron with its kink
/// at 1/2 changes slope by at most 2/3, and the slope jumps by 2 there.
pub fn abs_kink_target() -> TwoLayerNetwork {
    TwoLayerNetwork {
        activation: Activation::Relu,
        averaged: false,
        neurons: vec![Neuron::new(1.0, vec![1.0], -0.5), Neuron::new(1.0, vec![-1.0], 0.5)],
    }
}

/// Width lower bound for 1-Lipschitz targets on `[0,1]^d` relative to ReLU
/// Barron balls, with constants from this crate's estimates:
/// `α = 1/2`, `β = 1/d`, `C_X` from the Rademacher bound, `c_Y` the covering
/// constant and `C_Z` the smoothed-functional dual norm.
pub fn lipschitz_certificate(d: usize) -> Result<WidthBound, ProbeError> {
    if d < 3 {
        return Err(ProbeError::InvalidParameter(format!("the separation needs d ≥ 3, got {d}")));
    }
    let metric = TorusMetricConfig::new(Norm::LInf, false);
    let c_slow = covering_lower_bound(1, d, metric).map_err(|e| ProbeError::InvalidParameter(e.to_string()))?;
    let params = SeparationParams::new(
        0.5,
        1.0 / d as f64,
        2.0 * rademacher_bound(1.0, d, 1),
        c_slow,
        dual_norm_constant(d, default_gamma(d, Norm::LInf), Norm::LInf),
    )
    .map_err(|e| ProbeError::InvalidParameter(e.to_string()))?;
    WidthBound::from_params(&params).map_err(|e| ProbeError::InvalidParameter(e.to_string()))
}

/// One-sided consistency of a measured curve with a certified lower bound.
///
/// The optimizer only bounds the width of a single target from above, while
/// the certificate bounds the worst case over the unit ball, so the checks are:
/// the certificate never exceeds the trivial width 1, and the measured curve is
/// finite and nonincreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub t: Vec<f64>,
    pub certificate: Vec<f64>,
    pub certificate_below_one: bool,
    pub curve_finite: bool,
    pub curve_monotone: bool,
}

impl CertificateCheck {
    pub fn new(curve: &WidthCurve, bound: &WidthBound) -> Self {
        let t: Vec<f64> = curve.samples.iter().map(|s| s.t).collect();
        let certificate: Vec<f64> =
            t.iter().map(|&t| if t > 0.0 { bound.eval(t).map(|b| b.bound).unwrap_or(0.0) } else { 0.0 }).collect();
        CertificateCheck {
            certificate_below_one: certificate.iter().all(|c| *c <= 1.0),
            curve_finite: curve.all_finite(),
            curve_monotone: curve.is_monotone(),
            t,
            certificate,
        }
    }

    pub fn passed(&self) -> bool {
        self.certificate_below_one && self.curve_finite && self.curve_monotone
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> FitConfig {
        FitConfig { restarts: 2, steps: 300, quadrature: QuadratureSpec::MonteCarlo { points: 256 }, ..FitConfig::default() }
    }

    #[test]
    fn zero_budget_gives_zero_network() {
        let target = TargetFunction::barron(abs_kink_target()).unwrap();
        let r = fit_constrained(&target, 0.0, 4, &quick(), 1).unwrap();
        assert_eq!(r.net.width(), 0);
        let exact = (1.0f64 / 12.0).sqrt();
        assert!((r.error - exact).abs() < 0.02);
    }

    #[test]
    fn budget_is_respected() {
        let target = TargetFunction::random_distance(2, 3, 5).unwrap();
        for t in [0.1, 0.5, 2.0] {
            let r = fit_constrained(&target, t, 8, &quick(), 2).unwrap();
            assert!(r.path_norm <= t * (1.0 + 1e-9));
        }
    }

    #[test]
    fn projection_is_radial() {
        let mut net = abs_kink_target();
        project_to_budget(&mut net, 5.0);
        assert_eq!(net, abs_kink_target());
        project_to_budget(&mut net, 1.5);
        assert!((net.path_norm(PathNormOrder::L1) - 1.5).abs() < 1e-12);
        assert!((net.neurons[0].a - 0.5).abs() < 1e-12);
    }

    #[test]
    fn l1_projection() {
        let mut a = vec![3.0, -1.0, 0.5];
        project_l1(&mut a, 2.0);
        assert!((a.iter().map(|x| x.abs()).sum::<f64>() - 2.0).abs() < 1e-12);
        assert_eq!(a, vec![2.0, 0.0, 0.0]);
        let mut b = vec![0.1, -0.2];
        project_l1(&mut b, 1.0);
        assert_eq!(b, vec![0.1, -0.2]);
    }

    #[test]
    fn curve_is_monotone() {
        let target = TargetFunction::random_distance(2, 2, 9).unwrap();
        let c = rho_curve(&target, &[0.25, 0.5, 1.0, 2.0], 8, &quick(), 3).unwrap();
        assert!(c.is_monotone() && c.all_finite());
    }

    #[test]
    fn certificate_is_small() {
        let b = lipschitz_certificate(8).unwrap();
        assert!((b.exponent - 1.0 / 3.0).abs() < 1e-12);
        assert!(b.eval(b.threshold_t.max(1.0)).unwrap().bound <= 1.0);
    }
}
