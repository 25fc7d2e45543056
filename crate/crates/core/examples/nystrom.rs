//! Gram-matrix eigenvalues group into plateaus matching the spherical spectrum.

use widthlab::kernels::{multiplicity_u64, nystrom_spectrum, plateaus, relu_eigenvalue, KernelSpec};

pub fn main() {
    let d = 2;
    let eigs = nystrom_spectrum(&KernelSpec::RandomFeatureReluSphere { d }, 1500, 0).expect("n within limit");
    for (i, p) in plateaus(&eigs[..9], 0.2).iter().enumerate() {
        println!("plateau {i}: width {}, mean {:.4e}", p.width, p.mean);
    }
    for k in 0..=2 {
        let n = multiplicity_u64(d, k).expect("d >= 1").expect("small");
        println!("lambda_{k} = {:.4e} with multiplicity {n}", relu_eigenvalue(d, k).expect("d >= 2"));
    }
}
