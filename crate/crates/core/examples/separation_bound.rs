//! Width lower bound for Lipschitz functions against Barron balls in d = 8.

use widthlab::separation::{lipschitz_rates, SeparationParams, WidthBound};

pub fn main() {
    let d = 8;
    let (alpha, beta) = lipschitz_rates(d);
    let params = SeparationParams::new(*alpha.numer() as f64 / *alpha.denom() as f64, *beta.numer() as f64 / *beta.denom() as f64, 1.0, 1.0, 1.0)
        .expect("valid rates");
    let bound = WidthBound::from_params(&params).expect("alpha > beta");
    println!("d = {d}: alpha = {alpha}, beta = {beta}, exponent = {:.6}", bound.exponent);
    for t in [1.0, 10.0, 100.0, 1000.0] {
        let v = bound.eval(t).expect("positive budget");
        println!("  t = {t:>6}: bound {:.6e}", v.bound);
    }
}
