//! The Fourier moment criterion for a Gaussian bump and a plane wave.

use widthlab::barron::{fourier_barron_bound, Density, FourierAtom, FourierData};

pub fn main() {
    let gaussian = FourierData {
        atoms: vec![],
        density: Some(Density::Radial { dim: 3, profile: Box::new(|r: f64| (-r * r / 2.0).exp()) }),
    };
    let b = fourier_barron_bound(&gaussian).expect("finite data");
    println!("radial gaussian in 3d: C_f = {:.6} (8 pi = {:.6})", b.value, 8.0 * std::f64::consts::PI);
    let wave = FourierData {
        atoms: vec![FourierAtom::real(vec![3.0, 4.0], 0.5), FourierAtom::real(vec![-3.0, -4.0], 0.5)],
        density: None,
    };
    println!("cos(3x + 4y): C_f = {}", fourier_barron_bound(&wave).expect("finite data").value);
}
