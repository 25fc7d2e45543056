//! Acceptance suite: one PASS/FAIL line per criterion, tolerances as pinned.
//!
//! Criteria whose literal statement is false for the mathematics involved are
//! still evaluated literally and reported as FAIL; they are listed in
//! `UNATTAINABLE` together with the reason, and only an unexpected FAIL makes
//! this target exit nonzero. Diagnostics follow each line, indented.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::Rng;
use widthlab::barron::{
    barron_norm_lower_bound_1d, bv_norm_1d, explicit_representation, functional_certificate, rademacher_estimate,
    uniform_cube_sample, Activation, Neuron, PathNormOrder, PiecewiseLinear, RademacherConfig, TwoLayerNetwork,
};
use widthlab::kernels::{
    arccos_kernel, exact_eigenvalue, funk_hecke_eigenvalue, mc_kernel, multiplicity, ntk_gram, nystrom_top, plateaus,
    relu_eigenvalue, relu_sphere_profile, sphere_points, KernelSpec, KernelSpectrum, McKernel,
};
use widthlab::rng::{stream_id, stream_rng};
use widthlab::separation::{exponent_rational, lipschitz_rates, rkhs_rates, tail_sum_bound};
use widthlab::stats::LineFit;
use widthlab::transport::{empirical_w1_rate, Norm, RateConfig, TorusMetricConfig};
use widthlab::widthprobe::{
    abs_kink_target, fit_constrained, l2_error, lipschitz_certificate, rho_curve, CertificateCheck, FitConfig,
    QuadratureSpec, TargetFunction,
};

/// Criteria that fail as literally stated, with the reason.
const UNATTAINABLE: &[(u32, &str)] = &[
    (1, "the printed eigenvalue formula gives 1/(16π) at d=k=2; the Funk–Hecke value is 1/256"),
    (2, "at d=6 the printed formula decays like k^-4 and the harmonic-coefficient spectrum like k^-(d+3); neither like k^-(d-3)/2"),
    (5, "(1+a0²)K_rf − K_ntk is not PSD; the true relation is K_ntk ⪰ (1+a0²)K_rf"),
    (9, "‖f‖_B ≤ |f(0)|+|f'(0)|+‖f''‖ is false: relu(x−t) has Barron norm ≥ 1+t"),
];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome { pass, summary: summary.into(), details: Vec::new() }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }
}

fn ac1() -> Outcome {
    let mult_ok = (1..=10).all(|d| multiplicity(d, 1).unwrap() == BigUint::from(d as u64 + 1));
    let formula = exact_eigenvalue(2, 2).unwrap();
    let oracle = funk_hecke_eigenvalue(relu_sphere_profile(2), 2, 2, 128).unwrap().value;
    let rel = (formula - oracle).abs() / oracle.abs();
    let corrected = relu_eigenvalue(2, 2).unwrap();
    Outcome::new(
        mult_ok && rel <= 1e-6,
        format!("N(d,1)=d+1 for d=1..10: {mult_ok}; exact_eigenvalue(2,2)={formula:.9e} vs Funk–Hecke {oracle:.9e}, rel {rel:.3e} (tol 1e-6)"),
    )
    .note(format!("corrected closed form λ_2 = {corrected:.12e}, rel to oracle {:.1e}", (corrected - oracle).abs() / oracle))
}

fn even_slope(spec: &KernelSpectrum) -> f64 {
    let (ks, ls): (Vec<f64>, Vec<f64>) =
        spec.degrees.iter().filter(|e| e.k >= 2 && e.k % 2 == 0).map(|e| (e.k as f64, e.lambda)).unzip();
    LineFit::fit_loglog(&ks, &ls).unwrap().slope
}

fn mu_slope(spec: &KernelSpectrum) -> f64 {
    let idx: Vec<f64> = (100..=10_000).map(|i| i as f64).collect();
    let vals: Vec<f64> = (100..=10_000).map(|i| spec.mu[i - 1]).collect();
    LineFit::fit_loglog(&idx, &vals).unwrap().slope
}

fn ac2() -> Outcome {
    let d = 6;
    let printed = KernelSpectrum::printed_formula(d, 100).unwrap();
    let s_lambda = even_slope(&printed);
    let s_mu = mu_slope(&printed);
    let target_mu = -0.5 + 3.0 / (2.0 * d as f64);
    let pass = (s_lambda + 1.5).abs() <= 0.15 && (s_mu - target_mu).abs() <= 0.1;
    let true_spec = KernelSpectrum::relu_sphere(d, 100).unwrap();
    Outcome::new(
        pass,
        format!("d=6 printed formula: λ_k slope {s_lambda:.4} (want −1.5±0.15), μ_i slope {s_mu:.4} (want {target_mu:.4}±0.1)"),
    )
    .note(format!(
        "harmonic-coefficient spectrum: even-k slope {:.4}, μ_i slope on [1e2,1e4] {:.4}",
        even_slope(&true_spec),
        mu_slope(&true_spec)
    ))
}

fn ac3() -> Outcome {
    let spec = KernelSpec::RandomFeatureReluSphere { d: 2 };
    let exact = [relu_eigenvalue(2, 1).unwrap(), relu_eigenvalue(2, 2).unwrap()];
    let mut widths_ok = true;
    let mut gaps_ok = true;
    let mut means = [0.0f64; 2];
    let mut worst_ratio = f64::INFINITY;
    for seed in 0..5u64 {
        let eigs = nystrom_top(&spec, 2000, 12, seed).unwrap();
        let runs = plateaus(&eigs, 0.3);
        if runs.len() < 3 {
            widths_ok = false;
            continue;
        }
        widths_ok &= runs[1].width == 3 && runs[2].width == 5;
        for (j, run) in runs[1..3].iter().enumerate() {
            let ratio = run.gap / run.spread.max(f64::MIN_POSITIVE);
            worst_ratio = worst_ratio.min(ratio);
            gaps_ok &= ratio >= 5.0;
            means[j] += run.mean / 5.0;
        }
    }
    let rel: Vec<f64> = means.iter().zip(&exact).map(|(m, e)| (m - e).abs() / e).collect();
    Outcome::new(
        widths_ok && gaps_ok && rel.iter().all(|r| *r <= 0.05),
        format!(
            "plateau widths 3,5: {widths_ok}; min gap/spread {worst_ratio:.1} (≥5); means {:.5e},{:.5e} vs λ_1,λ_2 {:.5e},{:.5e}, rel {:.3},{:.3} (≤0.05)",
            means[0], means[1], exact[0], exact[1], rel[0], rel[1]
        ),
    )
    .note(format!("the printed formula would put λ_2 at {:.5e}", exact_eigenvalue(2, 2).unwrap()))
}

fn ac4() -> Outcome {
    let kernel = McKernel::gaussian_relu();
    let x = [1.0, 0.0];
    let mut worst = 20;
    let mut line = Vec::new();
    for (a, phi) in [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI].into_iter().enumerate() {
        let y = [phi.cos(), phi.sin()];
        let exact = arccos_kernel(phi);
        let hits = (0..20u64)
            .filter(|s| {
                let est = mc_kernel(&kernel, &x, &y, 100_000, stream_id(&[a as u64, *s])).unwrap();
                // a few ulps of slack: at φ = π both sides vanish and the standard error is 0
                (est.estimate - exact).abs() <= 3.0 * est.std_error + 4.0 * f64::EPSILON
            })
            .count();
        worst = worst.min(hits);
        line.push(format!("{hits}/20"));
    }
    Outcome::new(worst >= 18, format!("within 3 SE per angle: {} (need ≥18/20 each)", line.join(", ")))
}

fn ac5() -> Outcome {
    let (mut lower, mut upper, mut reversed, mut total) = (0, 0, 0, 0);
    let mut worst_upper = 0.0f64;
    for d in [3usize, 5] {
        for a0 in [0.5, 1.0, 2.0] {
            for seed in 0..20u64 {
                let pts = sphere_points(32, d, seed);
                let g = ntk_gram(&pts, a0, 4000, seed).unwrap();
                let r = &g.report;
                total += 1;
                lower += r.lower.holds as usize;
                upper += r.upper.holds as usize;
                reversed += r.reversed_upper.holds as usize;
                worst_upper = worst_upper.min(r.upper.min_eigenvalue / r.trace);
            }
        }
    }
    Outcome::new(
        lower == total && upper == total,
        format!("K_ntk − K_rf ⪰ 0 in {lower}/{total}; (1+a0²)K_rf − K_ntk ⪰ 0 in {upper}/{total} (tol 1e-8·trace)"),
    )
    .note(format!("worst min-eigenvalue/trace of the upper difference {worst_upper:.3e}"))
    .note(format!("reversed K_ntk − (1+a0²)K_rf ⪰ 0 in {reversed}/{total}"))
}

fn ac6() -> Outcome {
    let cfg = RateConfig {
        d: 2,
        n_values: vec![4, 8, 16, 32, 64, 128, 256],
        trials: 20,
        grid_resolution: 64,
        metric: TorusMetricConfig::new(Norm::LInf, false),
        seed: 2020,
    };
    let r = empirical_w1_rate(&cfg).unwrap();
    let exact = r.trials.iter().all(|t| !t.approximate);
    let slope = r.fit.map(|f| f.slope).unwrap_or(f64::NAN);
    let held = r.trials.iter().filter(|t| t.bound_holds).count();
    Outcome::new(
        exact && r.all_bounds_hold && (slope + 0.5).abs() <= 0.1,
        format!(
            "W1 ≥ covering bound − 2/64 in {held}/{} exact trials; slope {slope:.4} (want −0.5±0.1)",
            r.trials.len()
        ),
    )
    .note(format!(
        "mean W1 by n: {}",
        r.rows.iter().map(|row| format!("{}:{:.4}", row.n, row.mean_w1)).collect::<Vec<_>>().join(" ")
    ))
}

fn ac7() -> Outcome {
    let cfg = RademacherConfig::default();
    let ns = [16usize, 32, 64, 128, 256, 512, 1024];
    let mut pass = true;
    let mut parts = Vec::new();
    let (mut below, mut draws, mut est_below, mut configs) = (0, 0, 0, 0);
    let mut over = Vec::new();
    for d in [2usize, 8] {
        let mut est = Vec::new();
        for &n in &ns {
            let seed = stream_id(&[7, d as u64, n as u64]);
            let r = rademacher_estimate(&uniform_cube_sample(n, d, seed), Activation::Relu, &cfg, seed).unwrap();
            below += r.sups.iter().filter(|s| **s <= r.bound).count();
            for s in r.sups.iter().filter(|s| **s > r.bound) {
                over.push(format!("d={d} n={n}: {s:.4} > {:.4}", r.bound));
            }
            est_below += (r.estimate <= r.bound) as usize;
            configs += 1;
            draws += r.sups.len();
            est.push(r.estimate);
        }
        let nf: Vec<f64> = ns.iter().map(|n| *n as f64).collect();
        let slope = LineFit::fit_loglog(&nf, &est).unwrap().slope;
        pass &= (slope + 0.5).abs() <= 0.15;
        parts.push(format!("d={d} slope {slope:.4}"));
    }
    // The bound controls the expected supremum, which is what the estimate
    // measures; single sign draws may exceed it.
    pass &= est_below == configs;
    Outcome::new(
        pass,
        format!("estimates below 2L√(2 ln(2d)/n): {est_below}/{configs}; {} (want −0.5±0.15)", parts.join(", ")),
    )
    .note(format!("single draws below the bound: {below}/{draws} {}", over.join("; ")))
}

fn ac8() -> Outcome {
    let mut lip_ok = true;
    let mut rkhs_ok = true;
    let mut rejected = Vec::new();
    for d in 3i64..=20 {
        let (a, b) = lipschitz_rates(d);
        lip_ok &= exponent_rational(a, b).ok() == Some(Ratio::new(2, d - 2));
        let (a, b) = rkhs_rates(d);
        // the rational β/(α−β) itself, and the calculator's verdict
        let raw = (a != b).then(|| b / (a - b));
        let expected = (d != 7).then(|| Ratio::new(4, d - 7));
        rkhs_ok &= raw == expected;
        match exponent_rational(a, b) {
            Ok(v) => rkhs_ok &= d >= 8 && Some(v) == expected,
            Err(_) => {
                rkhs_ok &= d <= 7;
                rejected.push(d);
            }
        }
    }
    let tail_ok = (2..=6).all(|k| tail_sum_bound(k).unwrap().dominated());
    Outcome::new(
        lip_ok && rkhs_ok && tail_ok,
        format!("2/(d−2) exact for d=3..20: {lip_ok}; 4/(d−7) exact: {rkhs_ok}; tail domination k=2..6: {tail_ok}"),
    )
    .note(format!("α ≤ β, calculator rejects d ∈ {rejected:?} (4/(d−7) is negative or undefined there)"))
}

fn random_pl_network(rng: &mut impl Rng) -> TwoLayerNetwork {
    let m = rng.random_range(1..=6);
    let neurons = (0..m)
        .map(|_| {
            let w: f64 = if rng.random::<bool>() { 1.0 } else { -1.0 } * rng.random_range(0.2..3.0);
            let kink: f64 = rng.random_range(0.05..0.95);
            Neuron::new(rng.random_range(-2.0..2.0), vec![w], -w * kink)
        })
        .collect();
    TwoLayerNetwork::new(Activation::Relu, false, neurons).unwrap()
}

fn ac9() -> Outcome {
    let mut rng = stream_rng(9, 0);
    let (mut upper_ok, mut explicit_ok, mut certified) = (0, 0, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let net = random_pl_network(&mut rng);
        let f = PiecewiseLinear::from_network(&net).unwrap();
        let bv = bv_norm_1d(&f);
        upper_ok += (bv <= 2.0 * net.path_norm(PathNormOrder::L1) * (1.0 + 1e-12)) as usize;
        let explicit = explicit_representation(&f).path_norm(PathNormOrder::L1);
        explicit_ok += (explicit <= bv * (1.0 + 1e-12)) as usize;
        let lower = barron_norm_lower_bound_1d(&f);
        if lower > bv * (1.0 + 1e-12) {
            certified += 1;
            worst = worst.max(lower / bv);
        }
    }
    let probe = PiecewiseLinear::from_slopes(0.0, 0.0, &[(0.5, 1.0)]).unwrap();
    Outcome::new(
        upper_ok == 100 && explicit_ok == 100,
        format!("bv ≤ 2·path norm: {upper_ok}/100; explicit path norm ≤ |f(0)|+|f'(0)|+‖f''‖: {explicit_ok}/100"),
    )
    .note(format!("functions with certified ‖f‖_B > bv: {certified}/100, worst ratio {worst:.3}"))
    .note(format!(
        "relu(x − 1/2): bv {} but certificate L(f) = {}",
        bv_norm_1d(&probe),
        functional_certificate(&probe)
    ))
}

/// `∫_0^1 (f − g)²` for piecewise-linear `f`, `g`, exactly.
fn exact_sq_distance(f: &PiecewiseLinear, g: &PiecewiseLinear) -> f64 {
    let mut xs: Vec<f64> = f.xs.iter().chain(&g.xs).copied().filter(|x| (0.0..=1.0).contains(x)).collect();
    xs.extend([0.0, 1.0]);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.windows(2)
        .map(|w| {
            let (u, v) = (f.eval(w[0]) - g.eval(w[0]), f.eval(w[1]) - g.eval(w[1]));
            (w[1] - w[0]) * (u * u + u * v + v * v) / 3.0
        })
        .sum()
}

fn ac10() -> Outcome {
    let cfg = FitConfig { restarts: 2, steps: 800, quadrature: QuadratureSpec::MonteCarlo { points: 1024 }, ..FitConfig::default() };
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut envelope_ok = 0;
    let mut raw_ok = 0;
    let mut targets = Vec::new();
    let mut rng = stream_rng(10, 0);
    for i in 0..10u64 {
        let d = [1usize, 2, 4][i as usize % 3];
        let t = if i % 2 == 0 {
            TargetFunction::random_distance(d, 3, i).unwrap()
        } else {
            TargetFunction::barron(widthlab::barron::sample_unit_ball_network(&mut rng, d, 4, Activation::Relu)).unwrap()
        };
        targets.push(t);
    }
    for (i, t) in targets.iter().enumerate() {
        let c = rho_curve(t, &grid, 16, &cfg, i as u64).unwrap();
        envelope_ok += (c.is_monotone() && c.all_finite()) as usize;
        raw_ok += c
            .samples
            .windows(2)
            .all(|w| w[1].fitted_error <= w[0].fitted_error + 2.0 * (w[0].fitted_error_se + w[1].fitted_error_se))
            as usize;
    }

    // representable targets at their own path norm
    let fit_cfg = FitConfig { restarts: 4, steps: 4000, decay_every: 1000, quadrature: QuadratureSpec::MonteCarlo { points: 2048 }, ..FitConfig::default() };
    let mut errs = Vec::new();
    let mut reps = vec![abs_kink_target()];
    for d in [1usize, 2, 4] {
        reps.push(widthlab::barron::sample_unit_ball_network(&mut rng, d, 3, Activation::Relu));
    }
    for (i, net) in reps.iter().enumerate() {
        let s = net.path_norm(PathNormOrder::L1);
        let r = fit_constrained(&TargetFunction::barron(net.clone()).unwrap(), s, 16, &fit_cfg, i as u64).unwrap();
        errs.push(r.error);
    }

    let worst_err = errs.iter().fold(0.0f64, |m, e| m.max(*e));

    // quadrature against the exact piecewise-quadratic integral
    let mut quad_err = 0.0f64;
    for _ in 0..10 {
        let (a, b) = (random_pl_network(&mut rng), random_pl_network(&mut rng));
        let exact = exact_sq_distance(&PiecewiseLinear::from_network(&a).unwrap(), &PiecewiseLinear::from_network(&b).unwrap());
        let grid = l2_error(&a, &TargetFunction::barron(b).unwrap(), QuadratureSpec::Grid { panels: 1 << 16, order: 2 }, 0).unwrap();
        quad_err = quad_err.max((grid.value - exact).abs());
    }

    // one-sided consistency in d = 8
    let target = TargetFunction::random_distance(8, 4, 8).unwrap();
    let curve = rho_curve(&target, &[1.0, 2.0, 4.0, 8.0], 16, &cfg, 8).unwrap();
    let check = CertificateCheck::new(&curve, &lipschitz_certificate(8).unwrap());
    let slope = curve.fit.map(|f| f.slope).unwrap_or(f64::NAN);

    Outcome::new(
        envelope_ok == 10 && worst_err <= 1e-3 && quad_err <= 1e-10 && check.passed() && slope.is_finite(),
        format!(
            "monotone curves {envelope_ok}/10; representable targets worst error {worst_err:.2e} (≤1e-3); quadrature |grid − exact| {quad_err:.1e} (≤1e-10); d=8 one-sided check {}",
            check.passed()
        ),
    )
    .note(format!("representable targets (|x−1/2| at t=3, then d=1,2,4): {}", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(", ")))
    .note(format!("raw per-budget fits monotone within 2·(se₁+se₂): {raw_ok}/10"))
    .note(format!(
        "d=8: fitted slope {slope:.3}, reference −2/(d−2) = {:.3}, max certificate {:.3e}",
        -2.0 / 6.0,
        check.certificate.iter().fold(0.0f64, |m, c| m.max(*c))
    ))
}

type Criterion = (u32, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, Duration::from_secs(1), ac1),
        (2, Duration::from_secs(10), ac2),
        (3, Duration::from_secs(120), ac3),
        (4, Duration::from_secs(30), ac4),
        (5, Duration::from_secs(60), ac5),
        (6, Duration::from_secs(600), ac6),
        (7, Duration::from_secs(300), ac7),
        (8, Duration::from_secs(1), ac8),
        (9, Duration::from_secs(5), ac9),
        (10, Duration::MAX, ac10),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut unexpected = Vec::new();
    for (id, limit, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.pass && in_time;
        let limit_text = if limit == Duration::MAX { "none".to_string() } else { format!("{:.0?}", limit) };
        println!(
            "AC{id:<2} {}  {} [runtime {:.2?}, limit {limit_text}]",
            if pass { "PASS" } else { "FAIL" },
            out.summary,
            elapsed
        );
        for d in &out.details {
            println!("       {d}");
        }
        if !pass {
            match UNATTAINABLE.iter().find(|(k, _)| *k == id) {
                Some((_, why)) if in_time => println!("       expected failure: {why}"),
                _ => unexpected.push(id),
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
