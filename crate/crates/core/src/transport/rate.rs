use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{covering_lower_bound, w1_auto, DiscreteMeasure, TorusMetricConfig, TransportError, GRID_LIMIT};
use crate::rng::{stream_id, stream_rng};
use crate::stats::{LineFit, Running};

const RATE_TAG: u64 = 0x7261_7465;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConfig {
    pub d: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub grid_resolution: usize,
    pub metric: TorusMetricConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTrial {
    pub n: usize,
    pub trial: usize,
    pub w1: f64,
    pub lower_bound: f64,
    /// Stream id of this trial under the master seed.
    pub stream: u64,
    pub approximate: bool,
    /// `w1 >= lower_bound − 2/grid_resolution` (exact trials only).
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    pub mean_w1: f64,
    pub std_error: f64,
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub config: RateConfig,
    pub trials: Vec<RateTrial>,
    pub rows: Vec<RateRow>,
    /// Fit of `ln mean_w1` against `ln n`.
    pub fit: Option<LineFit>,
    /// Grid discretization slack used in the bound check.
    pub slack: f64,
    pub all_bounds_hold: bool,
}

/// Mean exact W1 between the grid-discretized uniform measure and `n` iid
/// uniform points, for each `n`, with a log-log slope fit.
pub fn empirical_w1_rate(cfg: &RateConfig) -> Result<RateReport, TransportError> {
    if cfg.d == 0 || cfg.trials == 0 || cfg.n_values.is_empty() || cfg.n_values.contains(&0) {
        return Err(TransportError::InvalidParameter("need d >= 1, trials >= 1 and nonempty positive n values".into()));
    }
    let points = (cfg.grid_resolution as u64).checked_pow(cfg.d as u32).unwrap_or(u64::MAX);
    if cfg.grid_resolution == 0 || points > GRID_LIMIT {
        return Err(TransportError::GridTooLarge { points, limit: GRID_LIMIT });
    }
    let grid = DiscreteMeasure::grid(cfg.d, cfg.grid_resolution)?;
    let slack = 2.0 / cfg.grid_resolution as f64;
    let jobs: Vec<(usize, usize)> =
        cfg.n_values.iter().flat_map(|&n| (0..cfg.trials).map(move |t| (n, t))).collect();
    let trials: Vec<RateTrial> = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let stream = stream_id(&[RATE_TAG, cfg.d as u64, n as u64, trial as u64]);
            let mut rng = stream_rng(cfg.seed, stream);
            let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..cfg.d).map(|_| rng.random::<f64>()).collect()).collect();
            let emp = DiscreteMeasure::uniform(pts)?;
            let w = w1_auto(&grid, &emp, cfg.metric)?;
            let lower_bound = covering_lower_bound(n as u64, cfg.d, cfg.metric)?;
            Ok(RateTrial {
                n,
                trial,
                w1: w.value,
                lower_bound,
                stream,
                approximate: w.approximate,
                bound_holds: w.approximate || w.value >= lower_bound - slack,
            })
        })
        .collect::<Result<_, TransportError>>()?;
    let rows: Vec<RateRow> = cfg
        .n_values
        .iter()
        .map(|&n| {
            let r: Running = trials.iter().filter(|t| t.n == n).map(|t| t.w1).collect();
            let lower_bound = trials.iter().find(|t| t.n == n).map_or(0.0, |t| t.lower_bound);
            RateRow { n, mean_w1: r.mean(), std_error: r.std_error(), lower_bound }
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_w1).collect();
    let fit = LineFit::fit_loglog(&xs, &ys);
    let all_bounds_hold = trials.iter().all(|t| t.bound_holds);
    Ok(RateReport { config: cfg.clone(), trials, rows, fit, slack, all_bounds_hold })
}
