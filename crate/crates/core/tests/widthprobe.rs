use approx::assert_relative_eq;
use proptest::prelude::*;
use widthlab::barron::{Activation, Neuron, PathNormOrder, TwoLayerNetwork};
use widthlab::widthprobe::*;

fn quick() -> FitConfig {
    FitConfig { restarts: 2, steps: 600, quadrature: QuadratureSpec::MonteCarlo { points: 1024 }, ..FitConfig::default() }
}

fn probe_net(d: usize) -> TwoLayerNetwork {
    let neurons = (0..4)
        .map(|i| {
            let w = (0..d).map(|j| ((i * 7 + j * 3) % 5) as f64 / 4.0 - 0.5).collect();
            Neuron::new(0.3 * (i as f64 - 1.5), w, 0.1 * i as f64)
        })
        .collect();
    TwoLayerNetwork::new(Activation::Relu, false, neurons).unwrap()
}

#[test]
fn kink_target_has_known_norm() {
    // ∫_0^1 (x − 1/2)² dx = 1/12
    let target = TargetFunction::barron(abs_kink_target()).unwrap();
    let zero = TwoLayerNetwork::zero(Activation::Relu);
    let e = l2_error(&zero, &target, QuadratureSpec::Grid { panels: 2, order: 3 }, 0).unwrap();
    assert_relative_eq!(e.value, 1.0 / 12.0, max_relative = 1e-14);
    assert_eq!(e.std_error, 0.0);
    assert_eq!(abs_kink_target().path_norm(PathNormOrder::L1), 3.0);
}

#[test]
fn grid_and_monte_carlo_agree() {
    for d in 1..=3 {
        let target = TargetFunction::random_distance(d, 3, 17).unwrap();
        let net = probe_net(d);
        let grid = l2_error(&net, &target, QuadratureSpec::Grid { panels: [256, 48, 12][d - 1], order: 4 }, 0).unwrap();
        let mc = l2_error(&net, &target, QuadratureSpec::MonteCarlo { points: 50_000 }, 3).unwrap();
        assert!((grid.value - mc.value).abs() <= 3.0 * mc.std_error, "d = {d}: {} vs {} ± {}", grid.value, mc.value, mc.std_error);
    }
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let target = TargetFunction::random_distance(2, 4, 1).unwrap();
    let net = probe_net(2);
    let a = l2_error(&net, &target, QuadratureSpec::MonteCarlo { points: 20_000 }, 5).unwrap();
    let b = l2_error(&net, &target, QuadratureSpec::MonteCarlo { points: 40_000 }, 5).unwrap();
    let ratio = b.std_error / a.std_error;
    assert!((ratio - std::f64::consts::FRAC_1_SQRT_2).abs() <= 0.2 * std::f64::consts::FRAC_1_SQRT_2, "{ratio}");
}

#[test]
fn quadrature_limits() {
    assert!(matches!(
        QuadratureSet::build(QuadratureSpec::Grid { panels: 100, order: 4 }, 4, 0),
        Err(ProbeError::QuadratureTooLarge { .. })
    ));
    let q = QuadratureSet::build(QuadratureSpec::Grid { panels: 3, order: 2 }, 2, 0).unwrap();
    assert_eq!(q.len(), 36);
    assert_relative_eq!(q.weights.iter().sum::<f64>(), 1.0, max_relative = 1e-14);
}

#[test]
fn fits_are_reproducible() {
    let target = TargetFunction::random_distance(2, 3, 2).unwrap();
    let a = fit_constrained(&target, 2.0, 8, &quick(), 7).unwrap();
    let b = fit_constrained(&target, 2.0, 8, &quick(), 7).unwrap();
    assert_eq!(a, b);
    let c = rho_curve(&target, &[0.5, 1.0, 2.0], 8, &quick(), 7).unwrap();
    let d = rho_curve(&target, &[0.5, 1.0, 2.0], 8, &quick(), 7).unwrap();
    assert_eq!(c, d);
    assert!(c.is_monotone() && c.all_finite());
}

#[test]
fn fits_respect_the_budget() {
    let target = TargetFunction::random_distance(3, 5, 4).unwrap();
    for t in [0.25, 1.0, 4.0] {
        let r = fit_constrained(&target, t, 12, &quick(), 1).unwrap();
        assert!(r.path_norm <= t * (1.0 + 1e-9), "{} > {t}", r.path_norm);
        assert_relative_eq!(r.net.path_norm(PathNormOrder::L1), r.path_norm, max_relative = 1e-12);
        assert_relative_eq!(r.error * r.error, r.sq_error, max_relative = 1e-12);
    }
    let zero = fit_constrained(&target, 0.0, 12, &quick(), 1).unwrap();
    assert_eq!(zero.path_norm, 0.0);
}

#[test]
fn kink_is_recovered_at_its_norm() {
    let target = TargetFunction::barron(abs_kink_target()).unwrap();
    let cfg = FitConfig { restarts: 4, steps: 1500, ..quick() };
    let at_norm = fit_constrained(&target, 3.0, 8, &cfg, 3).unwrap();
    assert!(at_norm.error < 5e-3, "{}", at_norm.error);
    // below the norm the error cannot vanish
    let below = fit_constrained(&target, 2.0, 8, &cfg, 3).unwrap();
    assert!(below.error > 0.02, "{}", below.error);
}

#[test]
fn certificate_is_below_trivial_width() {
    assert!(lipschitz_certificate(2).is_err());
    let target = TargetFunction::random_distance(3, 4, 9).unwrap();
    let curve = rho_curve(&target, &[1.0, 4.0], 8, &quick(), 2).unwrap();
    for d in [3usize, 5, 8] {
        let check = CertificateCheck::new(&curve, &lipschitz_certificate(d).unwrap());
        assert!(check.certificate_below_one, "d = {d}: {:?}", check.certificate);
    }
    assert!(CertificateCheck::new(&curve, &lipschitz_certificate(3).unwrap()).passed());
}

#[test]
fn distance_targets_are_one_lipschitz() {
    for d in [1usize, 3, 6] {
        let t = TargetFunction::random_distance(d, 5, d as u64).unwrap();
        let (worst, ok) = t.verify_lipschitz(4000, 1);
        assert!(ok && worst <= 1.0 + 1e-9);
    }
    assert!(matches!(
        TargetFunction::distance_to_points(vec![vec![0.1, 0.2], vec![0.3]]),
        Err(ProbeError::DimensionMismatch { target: 2, found: 1 })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_lands_in_the_ball(a in prop::collection::vec(-5.0f64..5.0, 1..6), t in 0.0f64..4.0) {
        let neurons = a.iter().enumerate().map(|(i, a)| Neuron::new(*a, vec![i as f64 - 2.0, 1.0], 0.5)).collect();
        let mut net = TwoLayerNetwork::new(Activation::Relu, false, neurons).unwrap();
        let before = net.path_norm(PathNormOrder::L1);
        let x = [0.3, 0.7];
        let f = net.eval(&x);
        project_to_budget(&mut net, t);
        let after = net.path_norm(PathNormOrder::L1);
        prop_assert!(after <= t * (1.0 + 1e-12) + 1e-15);
        if before <= t {
            prop_assert_eq!(after, before);
        } else if before > 0.0 {
            // radial: the function is scaled, not reshaped
            prop_assert!((net.eval(&x) - f * t / before).abs() <= 1e-12 * (1.0 + f.abs()));
        }
    }
}
