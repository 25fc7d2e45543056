//! The Fourier criterion `C_f = ∫ |f̂(ξ)| |ξ| dξ`.
//!
//! Convention: `f(x) = ∫ f̂(ξ) e^{i⟨ξ,x⟩} dξ + Σ_atoms mass · e^{i⟨ξ,x⟩}`,
//! so `cos⟨w,x⟩` has atoms of mass 1/2 at `±w`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::BarronError;
use crate::quadrature::integrate_half_line;

/// Point mass in frequency space with complex weight `re + i·im`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierAtom {
    pub frequency: Vec<f64>,
    pub re: f64,
    pub im: f64,
}

impl FourierAtom {
    pub fn real(frequency: Vec<f64>, mass: f64) -> Self {
        FourierAtom { frequency, re: mass, im: 0.0 }
    }
}

/// Absolutely continuous part of `f̂`, given through `|f̂|`.
pub enum Density {
    /// `|f̂(ξ)| = profile(|ξ|)` in dimension `dim`.
    Radial { dim: usize, profile: Box<dyn Fn(f64) -> f64 + Sync> },
    /// One-dimensional `|f̂(ξ)|` on the whole line.
    Line(Box<dyn Fn(f64) -> f64 + Sync>),
}

impl std::fmt::Debug for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Density::Radial { dim, .. } => write!(f, "Density::Radial {{ dim: {dim} }}"),
            Density::Line(_) => write!(f, "Density::Line"),
        }
    }
}

#[derive(Debug, Default)]
pub struct FourierData {
    pub atoms: Vec<FourierAtom>,
    pub density: Option<Density>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierBound {
    /// `C_f`; infinite when the density integral diverges.
    pub value: f64,
    pub atom_part: f64,
    pub density_part: f64,
    /// Quadrature error estimate of the density part.
    pub error: f64,
    pub divergent: bool,
}

fn surface_area(dim: usize) -> f64 {
    // |S^{dim-1}| = 2π^{dim/2}/Γ(dim/2)
    let h = dim as f64 / 2.0;
    2.0 * (h * std::f64::consts::PI.ln() - ln_gamma(h)).exp()
}

pub fn fourier_barron_bound(f: &FourierData) -> Result<FourierBound, BarronError> {
    let mut atom_part = 0.0;
    for (i, a) in f.atoms.iter().enumerate() {
        let v = a.re.hypot(a.im) * a.frequency.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !v.is_finite() {
            return Err(BarronError::NonFinite { context: format!("fourier atom {i}") });
        }
        atom_part += v;
    }
    let (density_part, error, converged) = match &f.density {
        None => (0.0, 0.0, true),
        Some(Density::Radial { dim, profile }) => {
            if *dim == 0 {
                return Err(BarronError::InvalidParameter("radial density needs dim >= 1".into()));
            }
            let area = surface_area(*dim);
            let r = integrate_half_line(|r| profile(r).abs() * r.powi(*dim as i32), 1e-12, 1e-10, 2000);
            (area * r.value, area * r.error, r.converged)
        }
        Some(Density::Line(g)) => {
            let r = integrate_half_line(|x| (g(x).abs() + g(-x).abs()) * x, 1e-12, 1e-10, 2000);
            (r.value, r.error, r.converged)
        }
    };
    let divergent = !converged || !density_part.is_finite();
    Ok(FourierBound {
        value: if divergent { f64::INFINITY } else { atom_part + density_part },
        atom_part,
        density_part: if divergent { f64::INFINITY } else { density_part },
        error,
        divergent,
    })
}
