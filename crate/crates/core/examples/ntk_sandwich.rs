//! Loewner comparisons between the tangent and random-feature Gram matrices.

use widthlab::kernels::{ntk_gram, sphere_points};

pub fn main() {
    let points = sphere_points(40, 3, 0);
    let g = ntk_gram(&points, 1.0, 4000, 0).expect("valid points");
    let r = &g.report;
    println!("K_ntk - K_rf:              min eig {:+.3e} holds {}", r.lower.min_eigenvalue, r.lower.holds);
    println!("(1 + a0^2) K_rf - K_ntk:   min eig {:+.3e} holds {}", r.upper.min_eigenvalue, r.upper.holds);
    println!("K_ntk - (1 + a0^2) K_rf:   min eig {:+.3e} holds {}", r.reversed_upper.min_eigenvalue, r.reversed_upper.holds);
}
