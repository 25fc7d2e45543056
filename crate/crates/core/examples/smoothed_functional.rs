//! Dual norm of ball averages around grid centers, against its dimension constant.

use widthlab::transport::{default_gamma, dual_norm_constant, Norm, SmoothedFunctional, TorusMetricConfig};

pub fn main() {
    let metric = TorusMetricConfig::new(Norm::LInf, true);
    let gamma = default_gamma(2, Norm::LInf);
    println!("gamma = {gamma:.4}, constant = {:.4}", dual_norm_constant(2, gamma, Norm::LInf));
    for side in [2usize, 4, 8, 16] {
        let centers = (0..side * side)
            .map(|i| vec![(i % side) as f64 / side as f64, (i / side) as f64 / side as f64])
            .collect();
        let f = SmoothedFunctional::new(centers, gamma, metric).expect("valid centers");
        let r = f.dual_norms().expect("radius within range");
        println!("n = {:>3}: radius {:.4}, |A_n| = {:.4}, |A_n - A| = {:.4}", r.n, r.epsilon, r.functional_norm, r.difference_norm);
    }
}
