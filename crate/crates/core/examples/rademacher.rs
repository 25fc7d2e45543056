//! Empirical Rademacher complexity of the unit Barron ball against its bound.

use widthlab::barron::{rademacher_estimate, uniform_cube_sample, Activation, RademacherConfig};

pub fn main() {
    let cfg = RademacherConfig { draws: 8, restarts: 4, steps: 40, ..RademacherConfig::default() };
    for n in [32usize, 128, 512] {
        let sample = uniform_cube_sample(n, 4, 0);
        let r = rademacher_estimate(&sample, Activation::Relu, &cfg, 0).expect("nonempty sample");
        println!("d = 4, n = {n:>3}: estimate {:.4} ± {:.4}, bound {:.4}", r.estimate, r.std_error, r.bound);
    }
}
