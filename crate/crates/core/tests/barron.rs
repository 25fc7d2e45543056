use approx::assert_relative_eq;
use proptest::prelude::*;
use widthlab::barron::*;
use widthlab::quadrature::integrate_adaptive;

fn neuron(d: usize) -> impl Strategy<Value = Neuron> {
    (-3.0f64..3.0, prop::collection::vec(-2.0f64..2.0, d), -2.0f64..2.0).prop_map(|(a, w, b)| Neuron::new(a, w, b))
}

fn relu_net(d: usize) -> impl Strategy<Value = TwoLayerNetwork> {
    (prop::collection::vec(neuron(d), 1..10), any::<bool>())
        .prop_map(|(n, averaged)| TwoLayerNetwork::new(Activation::Relu, averaged, n).unwrap())
}

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d)
}

#[test]
fn rademacher_bound_value() {
    // 2·sqrt(2 ln 16 / 1024)
    assert_relative_eq!(rademacher_bound(1.0, 8, 1024), 0.14717625281443433, max_relative = 1e-14);
    assert_relative_eq!(rademacher_bound(2.0, 8, 1024), 2.0 * 0.14717625281443433, max_relative = 1e-14);
}

#[test]
fn rademacher_estimate_is_reproducible_and_below_bound() {
    let sample = uniform_cube_sample(64, 3, 11);
    let cfg = RademacherConfig { draws: 6, restarts: 4, steps: 30, step_size: 0.5 };
    let a = rademacher_estimate(&sample, Activation::Relu, &cfg, 3).unwrap();
    let b = rademacher_estimate(&sample, Activation::Relu, &cfg, 3).unwrap();
    assert_eq!(a, b);
    assert!(a.estimate > 0.0 && a.estimate <= a.bound);
    assert_eq!(rademacher_estimate(&[], Activation::Relu, &cfg, 3).unwrap_err(), BarronError::EmptySample);
}

#[test]
fn kink_example() {
    // relu(x − 1/2) on [0, 1]
    let f = PiecewiseLinear::from_slopes(0.0, 0.0, &[(0.5, 1.0)]).unwrap();
    assert_eq!(bv_norm_1d(&f), 1.0);
    assert_eq!(functional_certificate(&f), 1.5);
    assert_eq!(barron_norm_lower_bound_1d(&f), 1.5);
    let rep = explicit_representation(&f);
    assert_relative_eq!(rep.path_norm(PathNormOrder::L1), 1.5, max_relative = 1e-15);
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        assert_relative_eq!(rep.eval(&[x]), (x - 0.5).max(0.0), epsilon = 1e-15);
    }
}

#[test]
fn explicit_representation_reproduces_random_breakpoints() {
    let f = PiecewiseLinear::new(vec![0.0, 0.2, 0.35, 0.8, 1.0], vec![0.3, -0.1, 0.4, 0.4, -0.2]).unwrap();
    let rep = explicit_representation(&f);
    let back = PiecewiseLinear::from_network(&rep).unwrap();
    for (a, b) in f.ys.iter().zip(&back.ys) {
        assert_relative_eq!(a, b, epsilon = 1e-14);
    }
    assert!(barron_norm_lower_bound_1d(&f) <= rep.path_norm(PathNormOrder::L1) + 1e-12);
    assert!(PiecewiseLinear::new(vec![0.0, 0.5], vec![1.0, 2.0]).is_err());
}

#[test]
fn relu_integral_matches_quadrature() {
    let net = TwoLayerNetwork::new(
        Activation::Relu,
        false,
        vec![Neuron::new(1.5, vec![2.0], -0.3), Neuron::new(-0.7, vec![-1.0], 0.6), Neuron::new(0.2, vec![0.0], 1.0)],
    )
    .unwrap();
    let exact = relu_integral_1d(&net, 0.0, 1.0).unwrap();
    let num = integrate_adaptive(|x| net.eval(&[x]), 0.0, 1.0, 1e-13, 1e-13, 400);
    assert_relative_eq!(exact, num.value, epsilon = 1e-10);
}

#[test]
fn fourier_criterion_of_gaussians() {
    // e^{-x²/2} has |f̂(ξ)| = e^{-ξ²/2}/√(2π); C_f = 2/√(2π)
    let line = FourierData {
        atoms: vec![],
        density: Some(Density::Line(Box::new(|x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()))),
    };
    let b = fourier_barron_bound(&line).unwrap();
    assert_relative_eq!(b.value, 0.7978845608028654, max_relative = 1e-8);
    // radial profile e^{-r²/2} in three dimensions: 4π ∫ r³ e^{-r²/2} dr = 8π
    let radial =
        FourierData { atoms: vec![], density: Some(Density::Radial { dim: 3, profile: Box::new(|r: f64| (-r * r / 2.0).exp()) }) };
    assert_relative_eq!(fourier_barron_bound(&radial).unwrap().value, 8.0 * std::f64::consts::PI, max_relative = 1e-8);
    // cos(3x + 4y): atoms of mass 1/2 at ±(3, 4)
    let cos = FourierData {
        atoms: vec![FourierAtom::real(vec![3.0, 4.0], 0.5), FourierAtom::real(vec![-3.0, -4.0], 0.5)],
        density: None,
    };
    assert_eq!(fourier_barron_bound(&cos).unwrap().value, 5.0);
    let heavy = FourierData { atoms: vec![], density: Some(Density::Line(Box::new(|x: f64| 1.0 / (1.0 + x * x)))) };
    assert!(fourier_barron_bound(&heavy).unwrap().divergent);
}

#[test]
fn json_round_trip() {
    let s = r#"{"activation": "relu", "averaged": true, "neurons": [[1.0, [0.5, -0.25], 0.1], [-2.0, [0.0, 1.0], 0.0]]}"#;
    let net = TwoLayerNetwork::from_json(s).unwrap();
    assert_eq!(net.width(), 2);
    assert_eq!(TwoLayerNetwork::from_json(&net.to_json()).unwrap(), net);
    assert!(TwoLayerNetwork::from_json(r#"{"activation": "relu", "neurons": [[1.0, [0.5], 0.0], [1.0, [0.5, 1.0], 0.0]]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rescaling_neurons_is_invisible(net in relu_net(3), c in 0.1f64..10.0, x in point(3)) {
        let mut scaled = net.clone();
        for n in &mut scaled.neurons {
            n.a /= c;
            n.w.iter_mut().for_each(|w| *w *= c);
            n.b *= c;
        }
        let (f, g) = (net.eval(&x), scaled.eval(&x));
        prop_assert!((f - g).abs() <= 1e-9 * (1.0 + f.abs()));
        let (p, q) = (net.path_norm(PathNormOrder::L1), scaled.path_norm(PathNormOrder::L1));
        prop_assert!((p - q).abs() <= 1e-9 * (1.0 + p));
    }

    #[test]
    fn path_norm_is_homogeneous(net in relu_net(2), lambda in -5.0f64..5.0) {
        let mut scaled = net.clone();
        scaled.scale_outer(lambda);
        let p = net.path_norm(PathNormOrder::L2);
        prop_assert!((scaled.path_norm(PathNormOrder::L2) - lambda.abs() * p).abs() <= 1e-12 * (1.0 + p));
    }

    #[test]
    fn path_norm_bounds_lipschitz_constant(net in relu_net(3), x in point(3), y in point(3)) {
        let sup = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let gap = (net.eval(&x) - net.eval(&y)).abs();
        prop_assert!(gap <= net.path_norm(PathNormOrder::L1) * sup + 1e-12);
    }

    #[test]
    fn path_norm_bounds_sup_on_cube(net in relu_net(2), x in point(2)) {
        prop_assert!(net.eval(&x).abs() <= net.path_norm(PathNormOrder::L1) + 1e-12);
    }

    #[test]
    fn concatenation_adds(f in relu_net(2), g in relu_net(2), x in point(2)) {
        let mut g = g;
        g.averaged = f.averaged;
        let h = f.concat(&g).unwrap();
        let sum = f.eval(&x) + g.eval(&x);
        prop_assert!((h.eval(&x) - sum).abs() <= 1e-9 * (1.0 + sum.abs()));
        let bound = f.path_norm(PathNormOrder::L1) + g.path_norm(PathNormOrder::L1);
        prop_assert!(h.path_norm(PathNormOrder::L1) <= bound * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn bv_norm_bounded_by_explicit_path_norm(v0 in -2.0f64..2.0, s0 in -2.0f64..2.0,
                                             kinks in prop::collection::btree_map(1u32..99, -3.0f64..3.0, 0..5)) {
        let kinks: Vec<(f64, f64)> = kinks.into_iter().map(|(t, j)| (t as f64 / 100.0, j)).collect();
        let f = PiecewiseLinear::from_slopes(v0, s0, &kinks).unwrap();
        let rep = explicit_representation(&f);
        prop_assert!(bv_norm_1d(&f) <= rep.path_norm(PathNormOrder::L1) + 1e-12);
        prop_assert!(barron_norm_lower_bound_1d(&f) <= rep.path_norm(PathNormOrder::L1) + 1e-12);
    }
}
