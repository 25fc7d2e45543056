use approx::assert_relative_eq;
use num_rational::Ratio;
use proptest::prelude::*;
use widthlab::separation::*;

#[test]
fn unit_constants_prefactor() {
    // 2^{-1/2} (1/2)^2 = 2^{-5/2}, evaluated by hand
    let p = SeparationParams::new(1.0, 0.5, 1.0, 1.0, 1.0).unwrap();
    let v = width_lower_bound(&p, 1.0).unwrap();
    assert_relative_eq!(v.bound, 2f64.powf(-2.5), max_relative = 1e-15);
    assert_relative_eq!(v.bound, 0.17677669529663687, max_relative = 1e-15);
    assert_eq!(v.exponent, 1.0);
}

#[test]
fn lipschitz_exponents() {
    for d in 3..=20 {
        let (a, b) = lipschitz_rates(d);
        assert_eq!(exponent_rational(a, b).unwrap(), Ratio::new(2, d - 2));
    }
}

#[test]
fn rkhs_exponents_and_rejection() {
    for d in 3..=20 {
        let (a, b) = rkhs_rates(d);
        match exponent_rational(a, b) {
            Ok(v) => assert_eq!(v, Ratio::new(4, d - 7)),
            Err(SeparationError::InvalidParams(_)) => assert!(d <= 7),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}

#[test]
fn below_threshold_is_flagged() {
    let p = SeparationParams::new(0.5, 0.25, 4.0, 1.0, 1.0).unwrap();
    let b = WidthBound::from_params(&p).unwrap();
    assert_relative_eq!(b.threshold_t, 1.0 / 8.0);
    let v = b.eval(0.1).unwrap();
    assert!(v.below_threshold && v.bound == 0.0);
    assert!(!b.eval(0.125).unwrap().below_threshold);
}

#[test]
fn invalid_inputs() {
    assert!(SeparationParams::new(0.3, 0.3, 1.0, 1.0, 1.0).is_err());
    assert!(SeparationParams::new(0.5, 0.1, 0.0, 1.0, 1.0).is_err());
    let p = SeparationParams::new(0.5, 0.1, 1.0, 1.0, 1.0).unwrap();
    assert!(width_lower_bound(&p, -1.0).is_err());
    assert!(width_lower_bound(&p, f64::NAN).is_err());
}

#[test]
fn schedule_first_stages() {
    let p = SeparationParams::new(1.0, 0.25, 2.0, 1.0, 1.0).unwrap();
    let s = build_schedule(&p, 3).unwrap();
    let log2: Vec<u64> = s.entries.iter().map(|e| e.log2_n_k).collect();
    assert_eq!(log2, vec![1, 4, 27]);
    // t_1 = c_Y / (2 C_X)
    assert_relative_eq!(s.entries[0].log_t_k, (1.0f64 / 4.0).ln(), max_relative = 1e-14);
    assert!(s.entries[0].effective_exponent.is_none());
}

#[test]
fn schedule_rejects_slow_rates() {
    let p = SeparationParams::new(1.0, 0.5, 1.0, 1.0, 1.0).unwrap();
    assert!(matches!(build_schedule(&p, 4), Err(SeparationError::ScheduleInapplicable { boundary: true, .. })));
    let p = SeparationParams::new(1.0, 0.6, 1.0, 1.0, 1.0).unwrap();
    assert!(matches!(build_schedule(&p, 4), Err(SeparationError::ScheduleInapplicable { boundary: false, .. })));
    let p = SeparationParams::new(1.0, 0.1, 1.0, 1.0, 1.0).unwrap();
    assert!(build_schedule(&p, MAX_SCHEDULE_K + 1).is_err());
}

#[test]
fn tail_bounds() {
    for k in 2..=6 {
        assert!(tail_sum_bound(k).unwrap().dominated(), "k = {k}");
    }
    for k in 1..MAX_TAIL_K {
        assert!(tail_sum_bound(k + 1).unwrap().log2_value < tail_sum_bound(k).unwrap().log2_value);
    }
    assert!(tail_sum_bound(0).is_err() && tail_sum_bound(MAX_TAIL_K + 1).is_err());
}

fn params() -> impl Strategy<Value = SeparationParams> {
    (0.05f64..2.0, 0.05f64..0.95, 0.1f64..10.0, 0.1f64..10.0, 0.1f64..10.0)
        .prop_map(|(a, r, cx, cy, cz)| SeparationParams::new(a, a * r, cx, cy, cz).unwrap())
}

proptest! {
    #[test]
    fn bound_nonincreasing(p in params(), s in 1.0f64..100.0, r in 1.0f64..10.0) {
        let b = WidthBound::from_params(&p).unwrap();
        let t1 = b.threshold_t * s;
        prop_assert!(b.eval(t1 * r).unwrap().bound <= b.eval(t1).unwrap().bound);
    }

    #[test]
    fn log_affine_slope(p in params(), s in 1.0f64..50.0, r in 1.5f64..20.0) {
        let b = WidthBound::from_params(&p).unwrap();
        let (t1, t2) = (b.threshold_t * s, b.threshold_t * s * r);
        let slope = (b.eval(t2).unwrap().bound.ln() - b.eval(t1).unwrap().bound.ln()) / r.ln();
        let want = -p.beta / (p.alpha - p.beta);
        prop_assert!((slope - want).abs() <= 1e-10 * want.abs().max(1.0), "{} vs {}", slope, want);
    }

    #[test]
    fn scaling_covariance(p in params(), s in 0.1f64..10.0) {
        let b = WidthBound::from_params(&p).unwrap();
        let q = SeparationParams::new(p.alpha, p.beta, p.c_fast, p.c_slow * s, p.c_ambient).unwrap();
        let c = WidthBound::from_params(&q).unwrap();
        let gap = p.alpha - p.beta;
        prop_assert!((c.prefactor / b.prefactor / s.powf(p.alpha / gap) - 1.0).abs() < 1e-12);
        prop_assert!((c.threshold_t / b.threshold_t / s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schedule_exponents_decrease(a in 0.2f64..2.0, r in 0.05f64..0.45) {
        let p = SeparationParams::new(a, a * r, 1.0, 1.0, 1.0).unwrap();
        let s = build_schedule(&p, 8).unwrap();
        let limit = p.beta / (p.alpha - p.beta);
        let exps: Vec<f64> = s.entries.iter().filter_map(|e| e.effective_exponent).collect();
        prop_assert!(exps.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(exps.iter().all(|e| *e > limit));
        prop_assert!(s.entries.windows(2).all(|w| w[1].log_t_k > w[0].log_t_k));
    }
}
