//! # widthlab
//!
//! A numerical laboratory for Kolmogorov-width separation between function
//! spaces used in machine learning: two-layer (Barron) networks, random feature
//! and neural tangent kernels, and Lipschitz functions.
//!
//! The crate is organized by the machinery each experiment needs:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`separation`] | Width lower bounds and multi-scale schedules from rate constants |
//! | [`transport`] | Exact W1 between discrete measures, covering bounds, smoothed functionals |
//! | [`barron`] | Two-layer networks, path norms, Rademacher estimates, Fourier and 1D BV norms |
//! | [`kernels`] | Arc-cosine / NTK kernels, spherical spectra, Funk–Hecke oracle, Nyström |
//! | [`widthprobe`] | Path-norm constrained fitting and measured width curves |
//! | [`cli`] | The `widthlab` binary: subcommands, manifests, CSV/JSON/SVG output |
//!
//! ## Quick start
//!
//! ```rust
//! use widthlab::separation::{SeparationParams, width_lower_bound};
//!
//! let params = SeparationParams::new(1.0, 0.5, 1.0, 1.0, 1.0).unwrap();
//! let value = width_lower_bound(&params, 1.0).unwrap();
//! assert!((value.bound - 2f64.powf(-2.5)).abs() < 1e-15);
//! ```
//!
//! Every stochastic routine takes an explicit `u64` seed; see [`rng`].

pub mod barron;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod rng;
pub mod separation;
pub mod stats;
pub mod transport;
pub mod widthprobe;

pub use error::{Error, ErrorKind, Result};
