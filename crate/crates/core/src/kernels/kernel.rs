use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::rng::{stream_id, stream_rng, Rng as StreamRng};
use crate::stats::Running;

/// `((π − φ)/π) cos φ + sin φ / π`.
pub fn arccos_kernel(phi: f64) -> f64 {
    use std::f64::consts::PI;
    ((PI - phi) / PI) * phi.cos() + phi.sin() / PI
}

fn angle(x: &[f64], y: &[f64]) -> (f64, f64) {
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        return (0.0, 0.0);
    }
    let c = (x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / (nx * ny)).clamp(-1.0, 1.0);
    (c.acos(), nx * ny)
}

fn with_bias(x: &[f64]) -> Vec<f64> {
    x.iter().copied().chain(std::iter::once(1.0)).collect()
}

/// Closed-form kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// ReLU features with `π⁰` uniform on `S^d`, inputs in `R^{d+1}`:
    /// `|x||y| (sin φ + (π − φ) cos φ) / (2π(d+1))`.
    RandomFeatureReluSphere { d: usize },
    /// ReLU features with standard Gaussian weights, normalized so that
    /// `k(x, y) = |x||y| · arccos_kernel(φ)`; inputs in `R^d`.
    RandomFeatureReluGaussian { d: usize },
    /// NTK of `a σ(⟨v, (x, 1)⟩)` with `|a| = a0` and `v` uniform on `S^d`,
    /// inputs in `R^d`: `k_RF + a0² (π − φ̃)/(2π) ⟨x̃, ỹ⟩`.
    NtkRelu { d: usize, a0: f64 },
    /// `k ≡ c` on the unit sphere of `R^dim`.
    Constant { c: f64, dim: usize },
}

impl KernelSpec {
    /// Length of the input vectors.
    pub fn input_dim(&self) -> usize {
        match *self {
            KernelSpec::RandomFeatureReluSphere { d } => d + 1,
            KernelSpec::RandomFeatureReluGaussian { d } | KernelSpec::NtkRelu { d, .. } => d,
            KernelSpec::Constant { dim, .. } => dim,
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        if self.input_dim() == 0 {
            return Err(KernelError::InvalidDimension(0));
        }
        match *self {
            KernelSpec::NtkRelu { a0, .. } if !(a0.is_finite() && a0 > 0.0) => {
                Err(KernelError::InvalidParameter(format!("a0 must be positive, got {a0}")))
            }
            KernelSpec::Constant { c, .. } if !c.is_finite() => Err(KernelError::InvalidParameter(format!("constant {c}"))),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        use std::f64::consts::PI;
        match *self {
            KernelSpec::RandomFeatureReluSphere { d } => {
                let (phi, s) = angle(x, y);
                s * arccos_kernel(phi) / (2.0 * (d as f64 + 1.0))
            }
            KernelSpec::RandomFeatureReluGaussian { .. } => {
                let (phi, s) = angle(x, y);
                s * arccos_kernel(phi)
            }
            KernelSpec::NtkRelu { d, a0 } => {
                let (xt, yt) = (with_bias(x), with_bias(y));
                let (phi, s) = angle(&xt, &yt);
                let rf = s * arccos_kernel(phi) / (2.0 * (d as f64 + 1.0));
                let dot: f64 = xt.iter().zip(&yt).map(|(a, b)| a * b).sum();
                rf + a0 * a0 * (PI - phi) / (2.0 * PI) * dot
            }
            KernelSpec::Constant { c, .. } => c,
        }
    }
}

/// Distribution of the inner parameters of a random-feature model.
#[derive(Debug, Clone, Copy)]
pub enum ParamDistribution {
    Gaussian,
    UniformSphere,
    /// Uniform direction times a radius drawn by the given function.
    Radial(fn(&mut StreamRng) -> f64),
}

impl ParamDistribution {
    fn sample(&self, rng: &mut StreamRng, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = StandardNormal.sample(rng));
        let scale = match self {
            ParamDistribution::Gaussian => return,
            ParamDistribution::UniformSphere => 1.0,
            ParamDistribution::Radial(radius) => radius(rng),
        };
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        out.iter_mut().for_each(|v| *v *= scale / norm);
    }
}

/// Random-feature kernel `scale · E[σ(⟨v, x⟩) σ(⟨v, y⟩)]`, with `x` extended
/// by a constant 1 when `bias` is set.
#[derive(Debug, Clone, Copy)]
pub struct McKernel {
    pub activation: fn(f64) -> f64,
    pub params: ParamDistribution,
    pub bias: bool,
    pub scale: f64,
}

fn relu(z: f64) -> f64 {
    z.max(0.0)
}

impl McKernel {
    /// Gaussian weights, no bias, scale 2: matches [`arccos_kernel`] on unit vectors.
    pub fn gaussian_relu() -> Self {
        McKernel { activation: relu, params: ParamDistribution::Gaussian, bias: false, scale: 2.0 }
    }

    /// Uniform-sphere weights, no bias, scale 1.
    pub fn sphere_relu() -> Self {
        McKernel { activation: relu, params: ParamDistribution::UniformSphere, bias: false, scale: 1.0 }
    }

    /// `σ ≡ 0`.
    pub fn zero() -> Self {
        McKernel { activation: |_| 0.0, params: ParamDistribution::Gaussian, bias: false, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Monte-Carlo estimate of the random-feature kernel at `(x, y)`.
pub fn mc_kernel(spec: &McKernel, x: &[f64], y: &[f64], samples: usize, seed: u64) -> Result<KernelEstimate, KernelError> {
    if samples < 100 {
        return Err(KernelError::InvalidParameter(format!("need at least 100 samples, got {samples}")));
    }
    if x.len() != y.len() || x.is_empty() {
        return Err(KernelError::InvalidParameter(format!("input lengths {} and {}", x.len(), y.len())));
    }
    let dim = x.len() + spec.bias as usize;
    let (xt, yt) = if spec.bias { (with_bias(x), with_bias(y)) } else { (x.to_vec(), y.to_vec()) };
    let mut rng = stream_rng(seed, stream_id(&[0x6d63_6b72, dim as u64]));
    let mut v = vec![0.0; dim];
    let mut acc = Running::new();
    for _ in 0..samples {
        spec.params.sample(&mut rng, &mut v);
        let zx: f64 = v.iter().zip(&xt).map(|(a, b)| a * b).sum();
        let zy: f64 = v.iter().zip(&yt).map(|(a, b)| a * b).sum();
        acc.push(spec.scale * (spec.activation)(zx) * (spec.activation)(zy));
    }
    Ok(KernelEstimate { estimate: acc.mean(), std_error: acc.std_error(), samples, seed })
}

/// Uniform random point on the unit sphere of `R^dim`.
pub(crate) fn sphere_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}
