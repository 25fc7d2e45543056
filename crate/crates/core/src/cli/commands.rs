use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::output::{loglog_svg, Cell, Csv, Series};
use crate::barron::{
    barron_norm_lower_bound_1d, bv_norm_1d, explicit_representation, functional_certificate, rademacher_estimate,
    uniform_cube_sample, Activation, PathNormOrder, PiecewiseLinear, RademacherConfig, TwoLayerNetwork,
};
use crate::error::{Error, Result};
use crate::kernels::{nystrom_top, ntk_gram, plateaus, sphere_points, KernelSpec, KernelSpectrum};
use crate::rng::stream_id;
use crate::separation::{build_schedule, tail_sum_bound, SeparationParams, WidthBound, MAX_TAIL_K};
use crate::stats::LineFit;
use crate::transport::{empirical_w1_rate, Norm, RateConfig, TorusMetricConfig};
use crate::widthprobe::{
    abs_kink_target, lipschitz_certificate, rho_curve, CertificateCheck, FitConfig, QuadratureSpec, TargetFunction,
};

/// Files produced by one subcommand.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub plot: Option<String>,
}

impl Artifacts {
    fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.add(name, serde_json::to_string_pretty(value)? + "\n");
        Ok(())
    }
}

fn pairs(xs: impl IntoIterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    xs.into_iter().collect()
}

// ---------------------------------------------------------------- separation

fn one() -> f64 {
    1.0
}

fn default_t() -> Vec<f64> {
    vec![1.0, 10.0, 100.0]
}

/// Flags of `separation`; every flag may also come from the config file.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SeparationArgs {
    /// Fast-space rate exponent α [required]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Slow-space rate exponent β [required]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// C_X [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_fast: Option<f64>,
    /// c_Y [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_slow: Option<f64>,
    /// C_Z [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_ambient: Option<f64>,
    /// Budgets, comma separated [default: 1,10,100]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparationConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub c_fast: f64,
    #[serde(default = "one")]
    pub c_slow: f64,
    #[serde(default = "one")]
    pub c_ambient: f64,
    #[serde(default = "default_t")]
    pub t: Vec<f64>,
}

pub fn separation(p: &SeparationConfig) -> Result<Artifacts> {
    let params = SeparationParams::new(p.alpha, p.beta, p.c_fast, p.c_slow, p.c_ambient)?;
    let bound = WidthBound::from_params(&params)?;
    let values = p.t.iter().map(|&t| bound.eval(t)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut csv = Csv::new(&["t", "bound", "exponent", "below_threshold"]);
    for v in &values {
        csv.row(vec![v.t.into(), v.bound.into(), v.exponent.into(), v.below_threshold.into()]);
    }
    let mut out = Artifacts::default();
    out.add("bounds.csv", csv.finish());
    out.json("bounds.json", &json!({ "bound": bound, "records": values }))?;
    out.plot = Some(loglog_svg(
        "width lower bound",
        "t",
        "bound",
        &[Series::line("bound", pairs(values.iter().map(|v| (v.t, v.bound))))],
        None,
    ));
    Ok(out)
}

// ------------------------------------------------------------------ schedule

fn default_k_max() -> u32 {
    6
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ScheduleArgs {
    /// Fast-space rate exponent α [required]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Slow-space rate exponent β, below α/2 [required]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// C_X [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_fast: Option<f64>,
    /// c_Y [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_slow: Option<f64>,
    /// C_Z [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_ambient: Option<f64>,
    /// C^Y [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_slow_upper: Option<f64>,
    /// Last stage, at most 12 [default: 6]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub c_fast: f64,
    #[serde(default = "one")]
    pub c_slow: f64,
    #[serde(default = "one")]
    pub c_ambient: f64,
    #[serde(default = "one")]
    pub c_slow_upper: f64,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
}

pub fn schedule(p: &ScheduleConfig) -> Result<Artifacts> {
    let params = SeparationParams::with_upper(p.alpha, p.beta, p.c_fast, p.c_slow, p.c_ambient, p.c_slow_upper)?;
    let sched = build_schedule(&params, p.k_max)?;
    let mut csv = Csv::new(&[
        "k",
        "log2_n_k",
        "log_m_k",
        "m_k_rounded",
        "log_t_k",
        "effective_exponent",
        "log_distance_bound",
    ]);
    for e in &sched.entries {
        csv.row(vec![
            e.k.into(),
            e.log2_n_k.into(),
            e.log_m_k.into(),
            e.m_k_rounded.into(),
            e.log_t_k.into(),
            e.effective_exponent.into(),
            e.log_distance_bound.into(),
        ]);
    }
    let mut tail = Csv::new(&["k", "log2_bound", "dominated"]);
    for k in 1..=p.k_max.min(MAX_TAIL_K) {
        let b = tail_sum_bound(k)?;
        tail.row(vec![k.into(), b.log2_value.into(), Cell::from((k >= 2).then(|| b.dominated()))]);
    }
    let mut out = Artifacts::default();
    out.add("schedule.csv", csv.finish());
    out.add("tail.csv", tail.finish());
    out.json("schedule.json", &sched.entries)?;
    let exps: Vec<(f64, f64)> =
        sched.entries.iter().filter_map(|e| e.effective_exponent.map(|x| (e.k as f64, x))).collect();
    out.plot = Some(loglog_svg("effective exponent by stage", "k", "exponent", &[Series::markers("exponent", exps)], None));
    Ok(out)
}

// ----------------------------------------------------------------- transport

fn default_d2() -> usize {
    2
}
fn default_n_list() -> Vec<usize> {
    vec![4, 8, 16, 32, 64, 128, 256]
}
fn default_trials() -> usize {
    20
}
fn default_grid() -> usize {
    64
}
fn default_norm() -> String {
    "linf".into()
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct TransportArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Sample sizes, comma separated [default: 4,8,...,256]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Trials per sample size [default: 20]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Grid resolution per axis for the reference measure [default: 64]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Ground norm: linf or l2 [default: linf]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    /// Use the flat torus metric
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodic: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportConfig {
    #[serde(default = "default_d2")]
    pub d: usize,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_norm")]
    pub norm: String,
    #[serde(default)]
    pub periodic: bool,
}

pub fn transport(p: &TransportConfig, seed: u64) -> Result<Artifacts> {
    let norm: Norm = p.norm.parse().map_err(|e| Error::Config(format!("--norm: {e}")))?;
    let cfg = RateConfig {
        d: p.d,
        n_values: p.n_list.clone(),
        trials: p.trials,
        grid_resolution: p.grid,
        metric: TorusMetricConfig::new(norm, p.periodic),
        seed,
    };
    let report = empirical_w1_rate(&cfg)?;
    let mut csv = Csv::new(&["d", "n", "trial", "w1", "lower_bound", "seed"]);
    for t in &report.trials {
        csv.row(vec![p.d.into(), t.n.into(), t.trial.into(), t.w1.into(), t.lower_bound.into(), t.stream.into()]);
    }
    let mut out = Artifacts::default();
    out.add("w1.csv", csv.finish());
    out.json(
        "fit.json",
        &json!({
            "rows": report.rows,
            "fit": report.fit,
            "slack": report.slack,
            "all_bounds_hold": report.all_bounds_hold,
            "approximate_trials": report.trials.iter().filter(|t| t.approximate).count(),
        }),
    )?;
    out.plot = Some(loglog_svg(
        "empirical W1 against n",
        "n",
        "W1",
        &[
            Series::markers("mean W1", pairs(report.rows.iter().map(|r| (r.n as f64, r.mean_w1)))),
            Series::line("covering bound", pairs(report.rows.iter().map(|r| (r.n as f64, r.lower_bound)))),
        ],
        report.fit.as_ref(),
    ));
    Ok(out)
}

// -------------------------------------------------------------------- barron

fn default_mode() -> String {
    "rademacher".into()
}
fn default_barron_n() -> Vec<usize> {
    vec![16, 32, 64, 128, 256, 512, 1024]
}
fn default_draws() -> usize {
    50
}
fn default_restarts() -> usize {
    32
}
fn default_rad_steps() -> usize {
    60
}
fn default_activation() -> String {
    "relu".into()
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct BarronArgs {
    /// rademacher (sweep over n) or network (norms of a network file) [default: rademacher]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Sample sizes, comma separated [default: 16,32,...,1024]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// Sign draws per sample size [default: 50]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    /// Random starts per draw [default: 32]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// Ascent steps per start [default: 60]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// relu, tanh, logistic or softplus [default: relu]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activation: Option<String>,
    /// Network JSON file (network mode)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarronConfig {
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_d2")]
    pub d: usize,
    #[serde(default = "default_barron_n")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_rad_steps")]
    pub steps: usize,
    #[serde(default = "default_activation")]
    pub activation: String,
    #[serde(default)]
    pub network: Option<PathBuf>,
}

pub fn barron(p: &BarronConfig, seed: u64) -> Result<Artifacts> {
    match p.mode.as_str() {
        "rademacher" => rademacher_sweep(p, seed),
        "network" => {
            let path = p.network.as_ref().ok_or_else(|| Error::Config("missing required flag --network".into()))?;
            network_report(&TwoLayerNetwork::from_json(&std::fs::read_to_string(path)?)?)
        }
        other => Err(Error::Config(format!("--mode must be rademacher or network, got {other:?}"))),
    }
}

fn rademacher_sweep(p: &BarronConfig, seed: u64) -> Result<Artifacts> {
    let activation: Activation = p.activation.parse().map_err(|e| Error::Config(format!("--activation: {e}")))?;
    let cfg = RademacherConfig { draws: p.draws, restarts: p.restarts, steps: p.steps, ..RademacherConfig::default() };
    let mut csv = Csv::new(&["d", "n", "estimate", "std_error", "bound", "all_below_bound", "seed"]);
    let mut rows = Vec::new();
    for &n in &p.n_list {
        let s = seed ^ stream_id(&[0x6261_726e, p.d as u64, n as u64]);
        let sample = uniform_cube_sample(n, p.d, s);
        let r = rademacher_estimate(&sample, activation, &cfg, s)?;
        csv.row(vec![
            p.d.into(),
            n.into(),
            r.estimate.into(),
            r.std_error.into(),
            r.bound.into(),
            r.all_below_bound.into(),
            s.into(),
        ]);
        rows.push(r);
    }
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let est: Vec<f64> = rows.iter().map(|r| r.estimate).collect();
    let fit = LineFit::fit_loglog(&ns, &est);
    let mut out = Artifacts::default();
    out.add("rademacher.csv", csv.finish());
    out.json(
        "fit.json",
        &json!({ "fit": fit, "all_below_bound": rows.iter().all(|r| r.all_below_bound), "config": cfg }),
    )?;
    out.plot = Some(loglog_svg(
        "Rademacher complexity of the unit ball",
        "n",
        "estimate",
        &[
            Series::markers("estimate", pairs(ns.iter().copied().zip(est.iter().copied()))),
            Series::line("bound", pairs(rows.iter().map(|r| (r.n as f64, r.bound)))),
        ],
        fit.as_ref(),
    ));
    Ok(out)
}

fn network_report(net: &TwoLayerNetwork) -> Result<Artifacts> {
    let mut report = json!({
        "width": net.width(),
        "dim": net.dim(),
        "path_norm_l1": net.path_norm(PathNormOrder::L1),
        "path_norm_l2": net.path_norm(PathNormOrder::L2),
    });
    if net.dim() == Some(1) && net.activation == Activation::Relu {
        let f = PiecewiseLinear::from_network(net)?;
        let explicit = explicit_representation(&f);
        report["bv_norm"] = json!(bv_norm_1d(&f));
        report["explicit_path_norm"] = json!(explicit.path_norm(PathNormOrder::L1));
        report["certificate"] = json!(functional_certificate(&f));
        report["barron_lower_bound"] = json!(barron_norm_lower_bound_1d(&f));
    }
    let mut out = Artifacts::default();
    out.json("network.json", &report)?;
    Ok(out)
}

// ------------------------------------------------------------------- kernels

fn default_kind() -> String {
    "spectrum".into()
}
fn default_degrees() -> usize {
    20
}
fn default_kernel_n() -> usize {
    2000
}
fn default_a0() -> f64 {
    1.0
}
fn default_param_samples() -> usize {
    20_000
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct KernelsArgs {
    /// spectrum, formula, nystrom or ntk [default: spectrum]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Sphere dimension d of S^d [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Highest degree (spectrum, formula) or number of eigenvalues (nystrom) [default: 20]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<usize>,
    /// Number of sample points (nystrom, ntk) [default: 2000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Outer weight scale of the tangent kernel [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    /// Parameter samples for the tangent kernel Gram matrices [default: 20000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param_samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelsConfig {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default = "default_d2")]
    pub d: usize,
    #[serde(default = "default_degrees")]
    pub degrees: usize,
    #[serde(default = "default_kernel_n")]
    pub n: usize,
    #[serde(default = "default_a0")]
    pub a0: f64,
    #[serde(default = "default_param_samples")]
    pub param_samples: usize,
}

pub fn kernels(p: &KernelsConfig, seed: u64) -> Result<Artifacts> {
    let mut out = Artifacts::default();
    match p.kind.as_str() {
        "spectrum" | "formula" => {
            let spec = if p.kind == "spectrum" {
                KernelSpectrum::relu_sphere(p.d, p.degrees)?
            } else {
                KernelSpectrum::printed_formula(p.d, p.degrees)?
            };
            let degrees: Vec<_> = spec
                .degrees
                .iter()
                .map(|e| json!({ "k": e.k, "lambda": e.lambda, "mult": e.multiplicity }))
                .collect();
            out.json(
                "spectrum.json",
                &json!({ "degrees": degrees, "mu": spec.mu, "truncated": spec.truncated, "flagged": spec.flagged_degrees() }),
            )?;
            let mut csv = Csv::new(&["k", "lambda", "mult", "formula", "oracle", "flagged"]);
            for e in &spec.degrees {
                csv.row(vec![
                    e.k.into(),
                    e.lambda.into(),
                    e.multiplicity.into(),
                    e.formula.into(),
                    e.oracle.into(),
                    e.flagged.into(),
                ]);
            }
            out.add("spectrum.csv", csv.finish());
            let pts: Vec<(f64, f64)> =
                spec.degrees.iter().filter(|e| e.k > 0 && e.lambda > 0.0).map(|e| (e.k as f64, e.lambda)).collect();
            let (ks, ls): (Vec<f64>, Vec<f64>) = pts.iter().copied().filter(|(k, _)| *k >= 2.0).unzip();
            out.plot = Some(loglog_svg("kernel eigenvalues", "k", "lambda_k", &[Series::markers("lambda_k", pts)], LineFit::fit_loglog(&ks, &ls).as_ref()));
        }
        "nystrom" => {
            let spec = KernelSpec::RandomFeatureReluSphere { d: p.d };
            let eigs = nystrom_top(&spec, p.n, p.degrees, seed)?;
            let mut csv = Csv::new(&["i", "eigenvalue"]);
            for (i, v) in eigs.iter().enumerate() {
                csv.row(vec![(i + 1).into(), (*v).into()]);
            }
            out.add("nystrom.csv", csv.finish());
            out.json("plateaus.json", &plateaus(&eigs, 0.05))?;
            out.plot = Some(loglog_svg(
                "Gram eigenvalues / n",
                "index",
                "eigenvalue",
                &[Series::markers("eigenvalue", pairs(eigs.iter().enumerate().map(|(i, v)| ((i + 1) as f64, *v))))],
                None,
            ));
        }
        "ntk" => {
            let points = sphere_points(p.n, p.d, seed);
            let g = ntk_gram(&points, p.a0, p.param_samples, seed)?;
            let mut report = g.report.clone();
            for c in [&mut report.lower, &mut report.upper, &mut report.reversed_upper] {
                c.offending_eigenvector = None;
            }
            out.json("sandwich.json", &report)?;
        }
        other => return Err(Error::Config(format!("--kind must be spectrum, formula, nystrom or ntk, got {other:?}"))),
    }
    Ok(out)
}

// --------------------------------------------------------------------- width

fn default_target() -> String {
    "distance".into()
}
fn default_points() -> usize {
    4
}
fn default_t_grid() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0, 8.0, 16.0]
}
fn default_width() -> usize {
    512
}
fn default_fit_restarts() -> usize {
    8
}
fn default_fit_steps() -> usize {
    2000
}
fn default_quadrature() -> usize {
    4096
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct WidthArgs {
    /// distance (to random points), abs (|x − 1/2| on [0,1]) or network [default: distance]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Input dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Number of points of the distance target [default: 4]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Network JSON file (network target)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<PathBuf>,
    /// Path-norm budgets, increasing, comma separated [default: 0.5,1,2,4,8,16]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    /// Hidden width [default: 512]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    /// Optimizer restarts per budget [default: 8]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// Optimizer steps [default: 2000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Monte-Carlo quadrature points [default: 4096]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WidthConfig {
    #[serde(default = "default_target")]
    pub target: String,
    #[serde(default = "default_d2")]
    pub d: usize,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub network: Option<PathBuf>,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default = "default_width")]
    pub width: usize,
    #[serde(default = "default_fit_restarts")]
    pub restarts: usize,
    #[serde(default = "default_fit_steps")]
    pub steps: usize,
    #[serde(default = "default_quadrature")]
    pub quadrature: usize,
}

pub fn width(p: &WidthConfig, seed: u64) -> Result<Artifacts> {
    let target = match p.target.as_str() {
        "distance" => TargetFunction::random_distance(p.d, p.points, seed)?,
        "abs" => {
            if p.d != 1 {
                return Err(Error::Config(format!("the abs target needs --d 1, got {}", p.d)));
            }
            TargetFunction::barron(abs_kink_target())?
        }
        "network" => {
            let path = p.network.as_ref().ok_or_else(|| Error::Config("missing required flag --network".into()))?;
            TargetFunction::barron(TwoLayerNetwork::from_json(&std::fs::read_to_string(path)?)?)?
        }
        other => return Err(Error::Config(format!("--target must be distance, abs or network, got {other:?}"))),
    };
    let cfg = FitConfig {
        restarts: p.restarts,
        steps: p.steps,
        quadrature: QuadratureSpec::MonteCarlo { points: p.quadrature },
        ..FitConfig::default()
    };
    let curve = rho_curve(&target, &p.t_grid, p.width, &cfg, seed)?;
    let mut csv = Csv::new(&["t", "error", "se"]);
    for s in &curve.samples {
        csv.row(vec![s.t.into(), s.error.into(), s.error_se.into()]);
    }
    let check = (target.dim() >= 3)
        .then(|| lipschitz_certificate(target.dim()).map(|b| CertificateCheck::new(&curve, &b)))
        .transpose()?;
    let mut out = Artifacts::default();
    out.add("curve.csv", csv.finish());
    out.json(
        "fit.json",
        &json!({
            "fit": curve.fit,
            "reference_exponent": curve.reference_exponent,
            "monotone": curve.is_monotone(),
            "certificate_check": check,
            "optimizer": curve.config,
            "width": curve.width,
            "samples": curve.samples,
        }),
    )?;
    out.plot = Some(loglog_svg(
        "measured width",
        "t",
        "L2 error",
        &[Series::markers("error", pairs(curve.samples.iter().map(|s| (s.t, s.error))))],
        curve.fit.as_ref(),
    ));
    Ok(out)
}
