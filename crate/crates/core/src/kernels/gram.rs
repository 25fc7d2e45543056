use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::sphere_point;
use super::{KernelError, KernelSpec};
use crate::rng::{stream_id, stream_rng};

/// A Gram matrix with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct GramResult {
    pub matrix: DMatrix<f64>,
    /// Nonincreasing.
    pub eigenvalues: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl GramResult {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Smallest eigenvalue is at least `−1e−8 · trace`.
    pub fn is_psd(&self) -> bool {
        self.eigenvalues.last().is_none_or(|m| *m >= -1e-8 * self.trace().abs())
    }
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>, KernelError> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(KernelError::Eigensolver("non-finite eigenvalue".into()));
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// `n` uniform points on the unit sphere of `R^dim`.
pub fn sphere_points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, stream_id(&[0x7370_6872, n as u64, dim as u64]));
    (0..n).map(|_| sphere_point(&mut rng, dim)).collect()
}

fn assemble(spec: &KernelSpec, points: &[Vec<f64>], scale: f64) -> DMatrix<f64> {
    let n = points.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| scale * spec.eval(&points[i], &points[j])).collect())
        .collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn check_points(spec: &KernelSpec, points: &[Vec<f64>]) -> Result<(), KernelError> {
    spec.validate()?;
    if points.is_empty() {
        return Err(KernelError::InvalidParameter("no points".into()));
    }
    let dim = spec.input_dim();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(KernelError::InvalidParameter(format!("point of length {} for kernel input dimension {dim}", p.len())));
    }
    Ok(())
}

/// Gram matrix `K_ij = k(x_i, x_j)` and its eigenvalues.
pub fn gram_matrix(spec: &KernelSpec, points: &[Vec<f64>]) -> Result<GramResult, KernelError> {
    check_points(spec, points)?;
    let matrix = assemble(spec, points, 1.0);
    let eigenvalues = sorted_eigenvalues(&matrix)?;
    Ok(GramResult { matrix, eigenvalues, points: points.to_vec() })
}

/// Largest supported Nyström sample.
pub const MAX_NYSTROM: usize = 5000;

/// Eigenvalues of `Gram/n` on `n` uniform sphere points, nonincreasing.
pub fn nystrom_spectrum(spec: &KernelSpec, n: usize, seed: u64) -> Result<Vec<f64>, KernelError> {
    if n == 0 || n > MAX_NYSTROM {
        return Err(KernelError::InvalidParameter(format!("n must be in 1..={MAX_NYSTROM}, got {n}")));
    }
    let points = sphere_points(n, spec.input_dim(), seed);
    check_points(spec, &points)?;
    sorted_eigenvalues(&assemble(spec, &points, 1.0 / n as f64))
}

/// The `k` largest eigenvalues of `Gram/n` by block subspace iteration with
/// Rayleigh–Ritz; same points as [`nystrom_spectrum`] for the same seed.
pub fn nystrom_top(spec: &KernelSpec, n: usize, k: usize, seed: u64) -> Result<Vec<f64>, KernelError> {
    if n == 0 || n > MAX_NYSTROM || k == 0 || k > n {
        return Err(KernelError::InvalidParameter(format!("need 1 <= k <= n <= {MAX_NYSTROM}, got k = {k}, n = {n}")));
    }
    let points = sphere_points(n, spec.input_dim(), seed);
    check_points(spec, &points)?;
    let a = assemble(spec, &points, 1.0 / n as f64);
    let b = (k + 10).min(n);
    let mut rng = stream_rng(seed, stream_id(&[0x7375_6273, n as u64, b as u64]));
    let start: Vec<Vec<f64>> = (0..b).map(|_| sphere_point(&mut rng, n)).collect();
    let mut q = DMatrix::from_fn(n, b, |i, j| start[j][i]);
    let mut prev: Vec<f64> = vec![f64::INFINITY; k];
    for _ in 0..500 {
        let z = &a * &q;
        q = z.qr().q();
        let t = q.transpose() * &a * &q;
        let mut ritz: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
        ritz.sort_by(|x, y| y.total_cmp(x));
        ritz.truncate(k);
        let scale = ritz[0].abs().max(1e-300);
        let done = ritz.iter().zip(&prev).all(|(r, p)| (r - p).abs() <= 1e-13 * scale);
        prev = ritz;
        if done {
            return Ok(prev);
        }
    }
    Err(KernelError::Eigensolver("subspace iteration did not converge in 500 sweeps".into()))
}

/// A run of nearly equal eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub start: usize,
    pub width: usize,
    pub mean: f64,
    /// `max − min` within the run.
    pub spread: f64,
    /// Distance to the nearest eigenvalue outside the run.
    pub gap: f64,
}

/// Split a nonincreasing list into runs, breaking wherever the next value
/// drops by more than `rel_gap` relative to the current one.
pub fn plateaus(eigs: &[f64], rel_gap: f64) -> Vec<Plateau> {
    let mut bounds = vec![0];
    for i in 0..eigs.len().saturating_sub(1) {
        if eigs[i + 1] < eigs[i] - rel_gap * eigs[i].abs() {
            bounds.push(i + 1);
        }
    }
    bounds.push(eigs.len());
    bounds
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let run = &eigs[w[0]..w[1]];
            let hi = run[0];
            let lo = run[run.len() - 1];
            let above = (w[0] > 0).then(|| eigs[w[0] - 1] - hi);
            let below = (w[1] < eigs.len()).then(|| lo - eigs[w[1]]);
            let gap = match (above, below) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => f64::INFINITY,
            };
            Plateau { start: w[0], width: run.len(), mean: run.iter().sum::<f64>() / run.len() as f64, spread: hi - lo, gap }
        })
        .collect()
}

/// Minimum eigenvalue of a difference of Gram matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub min_eigenvalue: f64,
    pub holds: bool,
    /// Eigenvector of the minimum eigenvalue, when the check fails.
    pub offending_eigenvector: Option<Vec<f64>>,
}

fn psd_check(m: DMatrix<f64>, tol: f64) -> SandwichCheck {
    let eig = SymmetricEigen::new(m);
    let (idx, min) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    let holds = min >= -tol;
    SandwichCheck {
        min_eigenvalue: min,
        holds,
        offending_eigenvector: (!holds).then(|| eig.eigenvectors.column(idx).iter().copied().collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub a0: f64,
    /// `trace(K_NTK)`; the tolerance is `1e−8` times this.
    pub trace: f64,
    /// `K_NTK − K_RF ⪰ 0`.
    pub lower: SandwichCheck,
    /// `(1 + a0²) K_RF − K_NTK ⪰ 0`.
    pub upper: SandwichCheck,
    /// `K_NTK − (1 + a0²) K_RF ⪰ 0`.
    pub reversed_upper: SandwichCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NtkGram {
    pub ntk: GramResult,
    pub rf: GramResult,
    pub report: SandwichReport,
}

/// NTK and random-feature Gram matrices from one shared parameter sample:
/// `v` uniform on `S^d ⊂ R^{d+1}`, `|a| = a0`, features `σ(⟨v, (x, 1)⟩)`.
pub fn ntk_gram(points: &[Vec<f64>], a0: f64, param_samples: usize, seed: u64) -> Result<NtkGram, KernelError> {
    let d = points.first().map(Vec::len).ok_or_else(|| KernelError::InvalidParameter("no points".into()))?;
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(KernelError::InvalidParameter("points must share a positive dimension".into()));
    }
    if !(a0.is_finite() && a0 > 0.0) || param_samples == 0 {
        return Err(KernelError::InvalidParameter(format!("need a0 > 0 and param_samples >= 1, got {a0}, {param_samples}")));
    }
    let n = points.len();
    let mut rng = stream_rng(seed, stream_id(&[0x6e74_6b67, d as u64, param_samples as u64]));
    let params: Vec<Vec<f64>> = (0..param_samples).map(|_| sphere_point(&mut rng, d + 1)).collect();
    let xt: Vec<Vec<f64>> = points.iter().map(|p| p.iter().copied().chain([1.0]).collect()).collect();
    let pre = DMatrix::from_fn(n, param_samples, |i, s| xt[i].iter().zip(&params[s]).map(|(a, b)| a * b).sum::<f64>());
    let phi = pre.map(|z| z.max(0.0));
    let psi = pre.map(|z| if z > 0.0 { 1.0 } else { 0.0 });
    let m = param_samples as f64;
    let k_rf = &phi * phi.transpose() / m;
    let k_step = &psi * psi.transpose() / m;
    let dots = DMatrix::from_fn(n, n, |i, j| xt[i].iter().zip(&xt[j]).map(|(a, b)| a * b).sum::<f64>());
    let a2 = a0 * a0;
    let k_ntk = &k_rf + k_step.component_mul(&dots) * a2;
    let trace = k_ntk.trace();
    let tol = 1e-8 * trace.abs();
    let report = SandwichReport {
        a0,
        trace,
        lower: psd_check(&k_ntk - &k_rf, tol),
        upper: psd_check(&k_rf * (1.0 + a2) - &k_ntk, tol),
        reversed_upper: psd_check(&k_ntk - &k_rf * (1.0 + a2), tol),
    };
    let ntk = GramResult { eigenvalues: sorted_eigenvalues(&k_ntk)?, matrix: k_ntk, points: points.to_vec() };
    let rf = GramResult { eigenvalues: sorted_eigenvalues(&k_rf)?, matrix: k_rf, points: points.to_vec() };
    Ok(NtkGram { ntk, rf, report })
}
