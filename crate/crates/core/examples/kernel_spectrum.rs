//! ReLU random-feature spectrum on the sphere, checked against quadrature.

use widthlab::kernels::KernelSpectrum;

pub fn main() {
    let d = 3;
    let s = KernelSpectrum::relu_sphere(d, 10).expect("small degree range");
    println!("{:>3} {:>6} {:>14} {:>14} {:>14}", "k", "N", "lambda", "oracle", "formula");
    for e in &s.degrees {
        let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6e}"));
        println!("{:>3} {:>6} {:>14.6e} {:>14} {:>14}", e.k, e.multiplicity, e.lambda, show(e.oracle), show(e.formula));
    }
    println!("degrees where the printed formula disagrees: {:?}", s.flagged_degrees());
    println!("partial trace {:.6} (kappa(1) = {:.6})", s.trace(), 1.0 / (2.0 * (d as f64 + 1.0)));
}
