//! Path norms, network files and the one-dimensional BV comparison.

use widthlab::barron::{
    barron_norm_lower_bound_1d, bv_norm_1d, explicit_representation, PathNormOrder, PiecewiseLinear, TwoLayerNetwork,
};

pub fn main() {
    let net = TwoLayerNetwork::from_json(r#"{"activation": "relu", "averaged": true, "neurons": [[2.0, [1.0, 0.0], -1.0], [-1.0, [0.5, 0.5], 0.25]]}"#)
        .expect("valid network");
    println!("width {} path norm (l1) {:.4}, (l2) {:.4}", net.width(), net.path_norm(PathNormOrder::L1), net.path_norm(PathNormOrder::L2));
    println!("f(0.3, 0.8) = {:.4}", net.eval(&[0.3, 0.8]));

    let kink = PiecewiseLinear::from_slopes(0.0, 0.0, &[(0.5, 1.0)]).expect("valid kinks");
    let rep = explicit_representation(&kink);
    println!(
        "relu(x - 1/2): bv norm {}, certified Barron lower bound {}, explicit path norm {}",
        bv_norm_1d(&kink),
        barron_norm_lower_bound_1d(&kink),
        rep.path_norm(PathNormOrder::L1)
    );
}
