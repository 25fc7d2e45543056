//! Command-line front end: one subcommand per module.
//!
//! Parameters resolve as flags over config file over defaults. Every run
//! writes `manifest.json` with the resolved configuration, which can be
//! passed back through `--config` to reproduce the outputs.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, ErrorKind, Result};
use commands::Artifacts;

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "widthlab", version, about = "Kolmogorov-width separation experiments")]
pub struct Cli {
    /// Master seed [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory [default: widthlab-out]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker thread cap [default: all cores]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON config; a previous manifest.json works as one
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write plot.svg
    #[arg(long, global = true)]
    pub plots: bool,
    /// Subcommand; may be omitted when the config names one
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Width lower bound over a list of budgets.
    #[command(after_help = "Outputs:\n  bounds.csv   t,bound,exponent,below_threshold\n  bounds.json  {bound, records:[{t,bound,exponent,below_threshold}]}")]
    Separation(commands::SeparationArgs),
    /// Multi-scale schedule in log domain.
    #[command(after_help = "Outputs:\n  schedule.csv   k,log2_n_k,log_m_k,m_k_rounded,log_t_k,effective_exponent,log_distance_bound\n  tail.csv       k,log2_bound,dominated\n  schedule.json  array of entries")]
    Schedule(commands::ScheduleArgs),
    /// Exact W1 between empirical and grid-discretized uniform measures.
    #[command(after_help = "Outputs:\n  w1.csv    d,n,trial,w1,lower_bound,seed\n  fit.json  {rows, fit, slack, all_bounds_hold, approximate_trials}")]
    Transport(commands::TransportArgs),
    /// Rademacher sweeps and network norm reports.
    #[command(after_help = "Outputs:\n  rademacher.csv  d,n,estimate,std_error,bound,all_below_bound,seed   (mode rademacher)\n  fit.json        {fit, all_below_bound, config}                      (mode rademacher)\n  network.json    path norms and 1D norm bounds                       (mode network)")]
    Barron(commands::BarronArgs),
    /// Kernel spectra, Gram-matrix spectra and the tangent-kernel sandwich.
    #[command(after_help = "Outputs:\n  spectrum.json  {degrees:[{k,lambda,mult}], mu:[...], truncated, flagged}   (spectrum, formula)\n  spectrum.csv   k,lambda,mult,formula,oracle,flagged                        (spectrum, formula)\n  nystrom.csv    i,eigenvalue                                                 (nystrom)\n  plateaus.json  runs of nearly equal eigenvalues                             (nystrom)\n  sandwich.json  minimum eigenvalues of both sandwich differences             (ntk)")]
    Kernels(commands::KernelsArgs),
    /// Measured width curve of a target under path-norm budgets.
    #[command(after_help = "Outputs:\n  curve.csv  t,error,se\n  fit.json   {fit, reference_exponent, monotone, certificate_check, optimizer, width, samples}")]
    Width(commands::WidthArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Separation(_) => "separation",
            Command::Schedule(_) => "schedule",
            Command::Transport(_) => "transport",
            Command::Barron(_) => "barron",
            Command::Kernels(_) => "kernels",
            Command::Width(_) => "width",
        }
    }

    fn flags(&self) -> Result<Value> {
        Ok(match self {
            Command::Separation(a) => serde_json::to_value(a)?,
            Command::Schedule(a) => serde_json::to_value(a)?,
            Command::Transport(a) => serde_json::to_value(a)?,
            Command::Barron(a) => serde_json::to_value(a)?,
            Command::Kernels(a) => serde_json::to_value(a)?,
            Command::Width(a) => serde_json::to_value(a)?,
        })
    }
}

/// Config file and manifest layout. Every field is optional in a config.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub subcommand: Option<String>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub plots: Option<bool>,
    /// Written to manifests, ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    /// Written to manifests, ignored on input.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
}

/// Fully resolved run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub subcommand: String,
    pub params: Value,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub threads: Option<usize>,
    pub plots: bool,
}

fn resolve_params<P: DeserializeOwned + Serialize>(merged: Map<String, Value>) -> Result<(P, Value)> {
    let p: P = serde_json::from_value(Value::Object(merged)).map_err(|e| {
        let msg = e.to_string();
        match msg.strip_prefix("missing field `").and_then(|r| r.split('`').next()) {
            Some(field) => Error::Config(format!("missing required flag --{}", field.replace('_', "-"))),
            None => Error::Config(msg),
        }
    })?;
    let canonical = serde_json::to_value(&p)?;
    Ok((p, canonical))
}

/// Apply precedence: flags over config over defaults.
pub fn resolve(cli: &Cli) -> Result<Resolved> {
    let file: RunConfig = match &cli.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?)
        .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?,
        None => RunConfig::default(),
    };
    let (subcommand, flags) = match (&cli.command, &file.subcommand) {
        (Some(c), Some(s)) if c.name() != s => {
            return Err(Error::Config(format!("config is for `{s}` but `{}` was requested", c.name())))
        }
        (Some(c), _) => (c.name().to_string(), c.flags()?),
        (None, Some(s)) => (s.clone(), Value::Object(Map::new())),
        (None, None) => return Err(Error::Config("missing subcommand".into())),
    };
    let mut merged = file.params.clone();
    if let Value::Object(f) = flags {
        merged.extend(f);
    }
    let params = match subcommand.as_str() {
        "separation" => resolve_params::<commands::SeparationConfig>(merged)?.1,
        "schedule" => resolve_params::<commands::ScheduleConfig>(merged)?.1,
        "transport" => resolve_params::<commands::TransportConfig>(merged)?.1,
        "barron" => resolve_params::<commands::BarronConfig>(merged)?.1,
        "kernels" => resolve_params::<commands::KernelsConfig>(merged)?.1,
        "width" => resolve_params::<commands::WidthConfig>(merged)?.1,
        other => return Err(Error::Config(format!("unknown subcommand `{other}`"))),
    };
    let threads = cli.threads.or(file.threads);
    if threads == Some(0) {
        return Err(Error::Config("--threads must be positive".into()));
    }
    Ok(Resolved {
        subcommand,
        params,
        seed: cli.seed.or(file.seed).unwrap_or(0),
        output_dir: cli.out.clone().or(file.output_dir).unwrap_or_else(|| PathBuf::from("widthlab-out")),
        threads,
        plots: cli.plots || file.plots.unwrap_or(false),
    })
}

fn typed<P: DeserializeOwned>(v: &Value) -> Result<P> {
    Ok(serde_json::from_value(v.clone())?)
}

/// Compute the artifacts of a resolved run without touching the filesystem
/// (except to read input network files).
pub fn execute(r: &Resolved) -> Result<Artifacts> {
    let work = || match r.subcommand.as_str() {
        "separation" => commands::separation(&typed(&r.params)?),
        "schedule" => commands::schedule(&typed(&r.params)?),
        "transport" => commands::transport(&typed(&r.params)?, r.seed),
        "barron" => commands::barron(&typed(&r.params)?, r.seed),
        "kernels" => commands::kernels(&typed(&r.params)?, r.seed),
        "width" => commands::width(&typed(&r.params)?, r.seed),
        other => Err(Error::Config(format!("unknown subcommand `{other}`"))),
    };
    match r.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn write_outputs(r: &Resolved, art: &Artifacts) -> Result<()> {
    let dir: &Path = &r.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let mut names = Vec::new();
    for (name, contents) in &art.files {
        std::fs::write(dir.join(name), contents)?;
        names.push(name.clone());
    }
    if r.plots {
        if let Some(svg) = &art.plot {
            std::fs::write(dir.join("plot.svg"), svg)?;
            names.push("plot.svg".into());
        }
    }
    let manifest = RunConfig {
        subcommand: Some(r.subcommand.clone()),
        params: match &r.params {
            Value::Object(m) => m.clone(),
            _ => Map::new(),
        },
        seed: Some(r.seed),
        output_dir: Some(r.output_dir.clone()),
        threads: r.threads,
        plots: Some(r.plots),
        version: Some(VERSION.into()),
        artifacts: names,
    };
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Numerical => EXIT_NUMERICAL,
        ErrorKind::Validation | ErrorKind::Io => EXIT_VALIDATION,
    }
}

/// Parse, run and write; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let result = resolve(&cli).and_then(|r| {
        let art = execute(&r)?;
        write_outputs(&r, &art)?;
        Ok(r)
    });
    match result {
        Ok(r) => {
            eprintln!("wrote {}", r.output_dir.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
