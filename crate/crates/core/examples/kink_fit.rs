//! |x - 1/2| is reachable exactly at path norm 3 and not below.

use widthlab::widthprobe::{abs_kink_target, fit_constrained, FitConfig, QuadratureSpec, TargetFunction};

pub fn main() {
    let target = TargetFunction::barron(abs_kink_target()).expect("nonempty network");
    let cfg = FitConfig { restarts: 2, steps: 1000, quadrature: QuadratureSpec::MonteCarlo { points: 1024 }, ..FitConfig::default() };
    for t in [1.0, 2.0, 3.0] {
        let r = fit_constrained(&target, t, 8, &cfg, 0).expect("valid budget");
        println!("t = {t}: L2 error {:.5}, path norm {:.4}", r.error, r.path_norm);
    }
}
