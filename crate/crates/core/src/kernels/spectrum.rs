//! Exact and numerical spectra of zonal kernels on `S^d`.
//!
//! For the ReLU random-feature kernel with `π⁰` uniform on `S^d`,
//! `κ(t) = (sin φ + (π − φ) cos φ) / (2π(d+1))`, `t = cos φ`. By Funk–Hecke,
//! `relu(⟨v, x⟩)` has harmonic coefficients
//! `c_k = (|S^{d−1}|/|S^d|) ∫_{−1}^{1} relu(t) P_k(t) (1−t²)^{(d−2)/2} dt`
//! and the kernel eigenvalues are `μ_k = c_k²`.
//!
//! [`exact_eigenvalue`] evaluates the closed formula
//! `(d−1)/(2π) · 2^{−k} Γ(d/2) Γ(k−1) / (Γ(k/2) Γ((k+d+2)/2))` as printed. It
//! equals `(d−1)/(2π) · |∫ relu(t) P_k(t)(1−t²)^{(d−2)/2} dt|`, a rescaled
//! coefficient rather than an eigenvalue, and it does not vanish at odd `k`.
//! [`KernelSpectrum::relu_sphere`] therefore stores [`relu_eigenvalue`]
//! (checked against the [`funk_hecke_eigenvalue`] oracle) and flags the
//! degrees where the printed formula disagrees.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use super::KernelError;
use crate::quadrature::gauss_legendre;
use crate::stats::LineFit;

/// `N(d, k) = (2k+d−1)/k · C(k+d−2, d−1)`, the dimension of degree-`k`
/// harmonics on `S^d`; `N(d, 0) = 1`.
pub fn multiplicity(d: usize, k: usize) -> Result<BigUint, KernelError> {
    if d == 0 {
        return Err(KernelError::InvalidDimension(d));
    }
    if k == 0 {
        return Ok(BigUint::from(1u32));
    }
    // C(k+d−2, d−1) built incrementally; each partial product is an integer.
    let mut binom = BigUint::from(1u32);
    for i in 1..d {
        binom = binom * BigUint::from(k - 1 + i) / BigUint::from(i);
    }
    Ok(binom * BigUint::from(2 * k + d - 1) / BigUint::from(k))
}

/// [`multiplicity`] when it fits in a `u64`.
pub fn multiplicity_u64(d: usize, k: usize) -> Result<Option<u64>, KernelError> {
    Ok(multiplicity(d, k)?.to_u64())
}

fn check_formula_args(d: usize, k: usize) -> Result<(), KernelError> {
    if d < 2 {
        return Err(KernelError::InvalidDimension(d));
    }
    if k < 2 {
        return Err(KernelError::UnsupportedDegree { k });
    }
    Ok(())
}

/// Natural log of the printed closed formula.
pub fn exact_eigenvalue_ln(d: usize, k: usize) -> Result<f64, KernelError> {
    check_formula_args(d, k)?;
    let (df, kf) = (d as f64, k as f64);
    Ok(((df - 1.0) / (2.0 * std::f64::consts::PI)).ln() - kf * std::f64::consts::LN_2 + ln_gamma(df / 2.0)
        + ln_gamma(kf - 1.0)
        - ln_gamma(kf / 2.0)
        - ln_gamma((kf + df + 2.0) / 2.0))
}

/// Values below this are reported as zero.
pub const UNDERFLOW: f64 = 1e-300;

/// The printed closed formula for `k ≥ 2`, evaluated in log-gamma form.
pub fn exact_eigenvalue(d: usize, k: usize) -> Result<f64, KernelError> {
    let v = exact_eigenvalue_ln(d, k)?.exp();
    Ok(if v < UNDERFLOW { 0.0 } else { v })
}

/// `|S^{d−1}| / |S^d|`.
fn area_ratio(d: usize) -> f64 {
    let df = d as f64;
    // |S^n| = 2π^{(n+1)/2}/Γ((n+1)/2)
    (ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0)).exp() / std::f64::consts::PI.sqrt()
}

/// Harmonic coefficient `c_k` of `t ↦ relu(t)` on `S^d` (signed), `d ≥ 2`.
pub fn relu_coefficient(d: usize, k: usize) -> Result<f64, KernelError> {
    if d < 2 {
        return Err(KernelError::InvalidDimension(d));
    }
    let r = area_ratio(d);
    let df = d as f64;
    Ok(match k {
        0 => r / df,
        // ∫_0^1 t² (1−t²)^{(d−2)/2} dt = B(3/2, d/2)/2
        1 => r * 0.5 * ln_beta(1.5, df / 2.0).exp(),
        _ if k % 2 == 1 => 0.0,
        _ => {
            let sign = if (k / 2) % 2 == 1 { 1.0 } else { -1.0 };
            let mag = 2.0 * std::f64::consts::PI / (df - 1.0) * r * exact_eigenvalue_ln(d, k)?.exp();
            sign * mag
        }
    })
}

/// Eigenvalue `μ_k = c_k²` of the ReLU random-feature kernel on `S^d`.
pub fn relu_eigenvalue(d: usize, k: usize) -> Result<f64, KernelError> {
    let c = relu_coefficient(d, k)?;
    let v = c * c;
    Ok(if v < UNDERFLOW { 0.0 } else { v })
}

/// `κ(t)` for the ReLU random-feature kernel with `π⁰` uniform on `S^d`.
pub fn relu_sphere_profile(d: usize) -> impl Fn(f64) -> f64 + Copy {
    move |t: f64| {
        let t = t.clamp(-1.0, 1.0);
        let phi = t.acos();
        (phi.sin() + (std::f64::consts::PI - phi) * t) / (2.0 * std::f64::consts::PI * (d as f64 + 1.0))
    }
}

/// Result of the Funk–Hecke quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunkHecke {
    pub value: f64,
    /// `|value(q) − value(2q)|`.
    pub refinement_gap: f64,
    pub converged: bool,
    pub nodes: usize,
}

/// Normalized Gegenbauer polynomial `P_k(t)` for `S^d` (`P_k(1) = 1`).
fn legendre_sphere(d: usize, k: usize, t: f64) -> f64 {
    let dd = (d + 1) as f64;
    let (mut p0, mut p1) = (1.0, t);
    if k == 0 {
        return p0;
    }
    for j in 1..k {
        let jf = j as f64;
        let p2 = ((2.0 * jf + dd - 2.0) * t * p1 - jf * p0) / (jf + dd - 2.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn funk_hecke_raw<F: Fn(f64) -> f64>(profile: &F, d: usize, k: usize, q: usize) -> f64 {
    let (x, w) = gauss_legendre(q);
    let half = std::f64::consts::FRAC_PI_2;
    let s: f64 = x
        .iter()
        .zip(&w)
        .map(|(xi, wi)| {
            let phi = half * (xi + 1.0);
            let t = phi.cos();
            wi * profile(t) * legendre_sphere(d, k, t) * phi.sin().powi(d as i32 - 1)
        })
        .sum();
    area_ratio(d) * half * s
}

/// `λ_k = (|S^{d−1}|/|S^d|) ∫_0^π κ(cos φ) P_k(cos φ) sin^{d−1}φ dφ`
/// by Gauss–Legendre in `φ`, with `q` and `2q` nodes compared for convergence
/// (relative gap above 1e−6 clears `converged`).
pub fn funk_hecke_eigenvalue<F: Fn(f64) -> f64>(profile: F, d: usize, k: usize, q: usize) -> Result<FunkHecke, KernelError> {
    if d == 0 {
        return Err(KernelError::InvalidDimension(d));
    }
    if q < 64 {
        return Err(KernelError::InvalidParameter(format!("need at least 64 quadrature points, got {q}")));
    }
    let q = q.max(2 * k + 16);
    let coarse = funk_hecke_raw(&profile, d, k, q);
    let fine = funk_hecke_raw(&profile, d, k, 2 * q);
    let gap = (fine - coarse).abs();
    let scale = fine.abs().max(1e-14 * funk_hecke_raw(&profile, d, 0, 2 * q).abs());
    Ok(FunkHecke { value: fine, refinement_gap: gap, converged: gap <= 1e-6 * scale, nodes: 2 * q })
}

/// Where a stored eigenvalue came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenSource {
    /// Squared harmonic coefficient, confirmed by the quadrature oracle.
    ClosedForm,
    /// The printed formula, stored as given.
    PrintedFormula,
    /// Quadrature only.
    Oracle,
    /// Supplied by the caller.
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub k: usize,
    pub lambda: f64,
    pub multiplicity: u64,
    pub source: EigenSource,
    /// Printed formula value, where defined.
    pub formula: Option<f64>,
    /// Quadrature value, where computed.
    pub oracle: Option<f64>,
    /// Formula and oracle disagree beyond 1e−6 relative.
    pub flagged: bool,
}

/// Eigenvalues by degree plus the flattened, repeated sequence `μ_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpectrum {
    pub d: usize,
    pub degrees: Vec<DegreeEntry>,
    /// Nonincreasing; `λ_k` repeated `N(d, k)` times (possibly truncated).
    pub mu: Vec<f64>,
    pub truncated: bool,
}

/// Cap on the flattened length.
pub const MAX_FLAT: usize = 20_000_000;

/// Degrees up to which the quadrature oracle is run when building spectra.
pub const ORACLE_MAX_K: usize = 40;

const ORACLE_NODES: usize = 256;

impl KernelSpectrum {
    /// ReLU random-feature kernel on `S^d`, degrees `0..=k_max`, with every
    /// degree up to [`ORACLE_MAX_K`] cross-checked by quadrature.
    pub fn relu_sphere(d: usize, k_max: usize) -> Result<Self, KernelError> {
        let profile = relu_sphere_profile(d);
        let mut degrees = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let oracle = (k <= ORACLE_MAX_K)
                .then(|| funk_hecke_eigenvalue(profile, d, k, ORACLE_NODES))
                .transpose()?
                .map(|f| f.value);
            let formula = exact_eigenvalue(d, k).ok();
            let lambda = relu_eigenvalue(d, k)?;
            let flagged = match (formula, oracle) {
                (Some(f), Some(o)) => !rel_close(f, o, 1e-6),
                _ => false,
            };
            degrees.push(DegreeEntry {
                k,
                lambda,
                multiplicity: mult(d, k)?,
                source: EigenSource::ClosedForm,
                formula,
                oracle,
                flagged,
            });
        }
        Ok(Self::from_degrees(d, degrees))
    }

    /// The printed formula for `k ≥ 2` as written (odd degrees included),
    /// with `k ∈ {0, 1}` from the quadrature oracle.
    pub fn printed_formula(d: usize, k_max: usize) -> Result<Self, KernelError> {
        let profile = relu_sphere_profile(d);
        let mut degrees = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let entry = if k < 2 {
                let o = funk_hecke_eigenvalue(profile, d, k, ORACLE_NODES)?.value;
                DegreeEntry { k, lambda: o, multiplicity: mult(d, k)?, source: EigenSource::Oracle, formula: None, oracle: Some(o), flagged: false }
            } else {
                let f = exact_eigenvalue(d, k)?;
                DegreeEntry { k, lambda: f, multiplicity: mult(d, k)?, source: EigenSource::PrintedFormula, formula: Some(f), oracle: None, flagged: false }
            };
            degrees.push(entry);
        }
        Ok(Self::from_degrees(d, degrees))
    }

    /// Spectrum from caller-supplied `(k, λ_k)` pairs.
    pub fn from_values(d: usize, values: &[(usize, f64)]) -> Result<Self, KernelError> {
        let degrees = values
            .iter()
            .map(|&(k, lambda)| {
                if !(lambda.is_finite() && lambda >= 0.0) {
                    return Err(KernelError::InvalidParameter(format!("eigenvalue {lambda} at k = {k}")));
                }
                Ok(DegreeEntry { k, lambda, multiplicity: mult(d, k)?, source: EigenSource::External, formula: None, oracle: None, flagged: false })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_degrees(d, degrees))
    }

    fn from_degrees(d: usize, degrees: Vec<DegreeEntry>) -> Self {
        let mut mu = Vec::new();
        let mut truncated = false;
        for e in &degrees {
            let room = MAX_FLAT - mu.len();
            let take = (e.multiplicity as usize).min(room);
            truncated |= take < e.multiplicity as usize;
            mu.extend(std::iter::repeat_n(e.lambda, take));
        }
        mu.sort_by(|a, b| b.total_cmp(a));
        KernelSpectrum { d, degrees, mu, truncated }
    }

    pub fn flagged_degrees(&self) -> Vec<usize> {
        self.degrees.iter().filter(|e| e.flagged).map(|e| e.k).collect()
    }

    pub fn lambda(&self, k: usize) -> Option<f64> {
        self.degrees.iter().find(|e| e.k == k).map(|e| e.lambda)
    }

    /// `Σ N(d, k) λ_k` over the listed degrees.
    pub fn trace(&self) -> f64 {
        self.degrees.iter().map(|e| e.multiplicity as f64 * e.lambda).sum()
    }
}

fn mult(d: usize, k: usize) -> Result<u64, KernelError> {
    multiplicity_u64(d, k)?.ok_or_else(|| KernelError::InvalidParameter(format!("N({d}, {k}) overflows u64")))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// X-side estimate for the orthogonal projection onto the top `n`
/// eigenfunctions: `sup_{‖f‖_H ≤ 1} ‖f − P_n f‖_{L²} = √μ_{n+1}`
/// (1-based `μ`). The matching Z-side constant is 1.
pub fn projection_tail_bound(spectrum: &KernelSpectrum, n: usize) -> Result<f64, KernelError> {
    spectrum
        .mu
        .get(n)
        .map(|m| m.sqrt())
        .ok_or(KernelError::IndexOutOfRange { index: n + 1, len: spectrum.mu.len() })
}

/// The reciprocal `1/√μ_{n+1}`, kept for comparison with [`projection_tail_bound`].
pub fn printed_x_estimate(spectrum: &KernelSpectrum, n: usize) -> Result<f64, KernelError> {
    Ok(1.0 / projection_tail_bound(spectrum, n)?)
}

/// Rate `α` with `√μ_{n+1} ≈ C n^{−α}`, from a log-log fit of `μ_i` over
/// `i ∈ [lo, hi]` (1-based), skipping zeros.
pub fn x_rate_from_spectrum(spectrum: &KernelSpectrum, lo: usize, hi: usize) -> Result<LineFit, KernelError> {
    let hi = hi.min(spectrum.mu.len());
    if lo == 0 || lo >= hi {
        return Err(KernelError::IndexOutOfRange { index: lo, len: spectrum.mu.len() });
    }
    let xs: Vec<f64> = (lo..=hi).map(|i| i as f64).collect();
    let ys: Vec<f64> = (lo..=hi).map(|i| spectrum.mu[i - 1]).collect();
    LineFit::fit_loglog(&xs, &ys).ok_or_else(|| KernelError::InvalidParameter("degenerate spectrum range".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_small_cases() {
        for d in 1..=10 {
            assert_eq!(multiplicity_u64(d, 1).unwrap(), Some(d as u64 + 1));
            assert_eq!(multiplicity_u64(d, 0).unwrap(), Some(1));
        }
        assert_eq!(multiplicity_u64(2, 2).unwrap(), Some(5));
        // S^2: 2k + 1
        for k in 0..50 {
            assert_eq!(multiplicity_u64(2, k).unwrap(), Some(2 * k as u64 + 1));
        }
        // S^1: two harmonics per degree
        assert_eq!(multiplicity_u64(1, 7).unwrap(), Some(2));
        // S^3: (k+1)^2
        assert_eq!(multiplicity_u64(3, 9).unwrap(), Some(100));
        assert!(multiplicity(0, 1).is_err());
        assert!(multiplicity(40, 400).unwrap().to_u64().is_none());
    }

    #[test]
    fn printed_formula_value() {
        let v = exact_eigenvalue(2, 2).unwrap();
        assert!((v - 1.0 / (16.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(matches!(exact_eigenvalue(2, 1), Err(KernelError::UnsupportedDegree { k: 1 })));
    }

    #[test]
    fn relu_spectrum_two_sphere() {
        assert!((relu_eigenvalue(2, 0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!((relu_eigenvalue(2, 1).unwrap() - 1.0 / 36.0).abs() < 1e-15);
        assert!((relu_eigenvalue(2, 2).unwrap() - 1.0 / 256.0).abs() < 1e-15);
        assert_eq!(relu_eigenvalue(2, 3).unwrap(), 0.0);
    }

    #[test]
    fn oracle_matches_closed_form() {
        for d in 2..=7 {
            let p = relu_sphere_profile(d);
            for k in 0..=12 {
                let fh = funk_hecke_eigenvalue(p, d, k, 128).unwrap();
                let cf = relu_eigenvalue(d, k).unwrap();
                let scale = relu_eigenvalue(d, 0).unwrap();
                assert!((fh.value - cf).abs() <= 1e-9 * cf.max(1e-6 * scale), "d={d} k={k}: {} vs {cf}", fh.value);
            }
        }
    }

    #[test]
    fn coefficients_match_quadrature() {
        for d in 2..=6 {
            for k in 0..=10 {
                // relu(cos φ) vanishes past π/2, so integrate the smooth half only
                let integral = crate::quadrature::integrate_gl(
                    |phi: f64| phi.cos() * legendre_sphere(d, k, phi.cos()) * phi.sin().powi(d as i32 - 1),
                    0.0,
                    std::f64::consts::FRAC_PI_2,
                    200,
                );
                let fh = area_ratio(d) * integral;
                let c = relu_coefficient(d, k).unwrap();
                assert!((fh - c).abs() < 1e-9 * c.abs().max(1e-4), "d={d} k={k}: {fh} vs {c}");
            }
        }
    }

    #[test]
    fn constant_profile_has_only_degree_zero() {
        for k in 1..6 {
            let fh = funk_hecke_eigenvalue(|_| 2.0, 3, k, 64).unwrap();
            assert!(fh.value.abs() < 1e-13);
        }
        let fh0 = funk_hecke_eigenvalue(|_| 2.0, 3, 0, 64).unwrap();
        assert!((fh0.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn spectrum_flags_printed_formula() {
        let s = KernelSpectrum::relu_sphere(2, 6).unwrap();
        assert_eq!(s.flagged_degrees(), vec![2, 3, 4, 5, 6]);
        assert!(s.trace() <= relu_sphere_profile(2)(1.0));
        assert_eq!(s.mu.len(), 49);
        assert!(s.mu.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn projection_bound_indexing() {
        let s = KernelSpectrum::from_values(2, &[(0, 1.0), (1, 0.25)]).unwrap();
        assert_eq!(projection_tail_bound(&s, 0).unwrap(), 1.0);
        assert_eq!(projection_tail_bound(&s, 1).unwrap(), 0.5);
        assert_eq!(printed_x_estimate(&s, 1).unwrap(), 2.0);
        assert!(projection_tail_bound(&s, 4).is_err());
    }
}
