//! Measured width curve of a distance function under path-norm budgets.

use widthlab::widthprobe::{lipschitz_certificate, rho_curve, CertificateCheck, FitConfig, QuadratureSpec, TargetFunction};

pub fn main() {
    let target = TargetFunction::random_distance(3, 4, 0).expect("valid target");
    let cfg = FitConfig { restarts: 2, steps: 400, quadrature: QuadratureSpec::MonteCarlo { points: 1024 }, ..FitConfig::default() };
    let curve = rho_curve(&target, &[0.5, 1.0, 2.0, 4.0], 16, &cfg, 0).expect("valid grid");
    for s in &curve.samples {
        println!("t = {:>4}: error {:.4} ± {:.4} (path norm {:.3})", s.t, s.error, s.error_se, s.path_norm);
    }
    let check = CertificateCheck::new(&curve, &lipschitz_certificate(3).expect("d >= 3"));
    println!("certificate {:?}, consistent: {}", check.certificate, check.passed());
}
