//! Width lower bounds from rate separation.
//!
//! If linear functionals `A_n → A` converge like `C_X n^{-α}` on the unit ball
//! of a space `X`, no faster than `c_Y n^{-β}` on the unit ball of `Y`, and stay
//! bounded by `C_Z` on the ambient space, then the radius-`t` ball of `X`
//! approximates `Y` no better than `t^{-β/(α-β)}`. This module evaluates that
//! bound and the multi-scale schedule (`n_k`, `m_k`, `t_k`) used to build a
//! single poorly approximable element.
//!
//! The schedule quantities are astronomically large (`n_k = 2^(k^k)`), so they
//! are kept in log domain: base 2 for `n_k`, natural log for everything else.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparationError {
    #[error("invalid separation parameters: {0}")]
    InvalidParams(String),
    #[error("schedule needs beta < alpha/2 (alpha = {alpha}, beta = {beta})")]
    ScheduleInapplicable { alpha: f64, beta: f64, boundary: bool },
    #[error("degree k = {k} outside the supported range {min}..={max}")]
    OutOfRange { k: u32, min: u32, max: u32 },
    #[error("t must be positive and finite, got {0}")]
    InvalidT(f64),
}

/// Rate constants of the three operator-norm estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationParams {
    /// Rate exponent on the fast space.
    pub alpha: f64,
    /// Rate exponent on the slow space.
    pub beta: f64,
    /// Upper constant on the fast space.
    pub c_fast: f64,
    /// Lower constant on the slow space.
    pub c_slow: f64,
    /// Uniform bound on the ambient space.
    pub c_ambient: f64,
    /// Upper operator-norm bound on the slow space (schedule only).
    pub c_slow_upper: f64,
}

impl SeparationParams {
    /// Parameters with `c_slow_upper = c_slow`.
    pub fn new(
        alpha: f64,
        beta: f64,
        c_fast: f64,
        c_slow: f64,
        c_ambient: f64,
    ) -> Result<Self, SeparationError> {
        Self::with_upper(alpha, beta, c_fast, c_slow, c_ambient, c_slow)
    }

    pub fn with_upper(
        alpha: f64,
        beta: f64,
        c_fast: f64,
        c_slow: f64,
        c_ambient: f64,
        c_slow_upper: f64,
    ) -> Result<Self, SeparationError> {
        let p = SeparationParams { alpha, beta, c_fast, c_slow, c_ambient, c_slow_upper };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SeparationError> {
        let named = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("c_fast", self.c_fast),
            ("c_slow", self.c_slow),
            ("c_ambient", self.c_ambient),
            ("c_slow_upper", self.c_slow_upper),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(SeparationError::InvalidParams(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.alpha <= self.beta {
            return Err(SeparationError::InvalidParams(format!(
                "need alpha > beta, got alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    /// `β/(α−β)`.
    pub fn exponent(&self) -> f64 {
        self.beta / (self.alpha - self.beta)
    }
}

/// The closed-form lower bound `ρ(t) ≥ prefactor · t^{-exponent}` for
/// `t ≥ threshold_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthBound {
    pub exponent: f64,
    pub prefactor: f64,
    pub threshold_t: f64,
}

impl WidthBound {
    pub fn from_params(p: &SeparationParams) -> Result<Self, SeparationError> {
        p.validate()?;
        let gap = p.alpha - p.beta;
        let exponent = p.beta / gap;
        let log_prefactor = -p.beta * std::f64::consts::LN_2
            + (p.alpha / gap) * (p.c_slow / 2.0).ln()
            - p.c_ambient.ln()
            - exponent * p.c_fast.ln();
        Ok(WidthBound {
            exponent,
            prefactor: log_prefactor.exp(),
            threshold_t: p.c_slow / (2.0 * p.c_fast),
        })
    }

    /// Bound at `t`; zero (flagged) below the validity threshold.
    pub fn eval(&self, t: f64) -> Result<BoundValue, SeparationError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(SeparationError::InvalidT(t));
        }
        if t < self.threshold_t {
            return Ok(BoundValue { t, bound: 0.0, exponent: self.exponent, below_threshold: true });
        }
        Ok(BoundValue {
            t,
            bound: self.prefactor * t.powf(-self.exponent),
            exponent: self.exponent,
            below_threshold: false,
        })
    }

    /// Asymptotic constant of `liminf t^{exponent} ρ(t)`, i.e. the prefactor
    /// without the `2^{-β}` loss.
    pub fn liminf_constant(&self, beta: f64) -> f64 {
        self.prefactor * 2f64.powf(beta)
    }
}

/// One evaluation of the width lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub t: f64,
    pub bound: f64,
    pub exponent: f64,
    pub below_threshold: bool,
}

/// Lower bound on the Kolmogorov-type width at budget `t`.
pub fn width_lower_bound(params: &SeparationParams, t: f64) -> Result<BoundValue, SeparationError> {
    WidthBound::from_params(params)?.eval(t)
}

/// `β/(α−β)` in exact rational arithmetic.
pub fn exponent_rational(
    alpha: Ratio<i64>,
    beta: Ratio<i64>,
) -> Result<Ratio<i64>, SeparationError> {
    let zero = Ratio::from_integer(0);
    if beta <= zero || alpha <= zero {
        return Err(SeparationError::InvalidParams(format!(
            "alpha and beta must be positive, got alpha = {alpha}, beta = {beta}"
        )));
    }
    if alpha <= beta {
        return Err(SeparationError::InvalidParams(format!(
            "need alpha > beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(beta / (alpha - beta))
}

/// Rates for uniform Monte-Carlo integration on Barron space (`α = 1/2`)
/// against empirical-measure convergence on Lipschitz functions (`β = 1/d`).
pub fn lipschitz_rates(d: i64) -> (Ratio<i64>, Ratio<i64>) {
    (Ratio::new(1, 2), Ratio::new(1, d))
}

/// Rates for spectral projection on the ReLU random-feature RKHS
/// (`α = 1/4 − 3/(4d)`) against the Barron lower rate (`β = 1/d`).
pub fn rkhs_rates(d: i64) -> (Ratio<i64>, Ratio<i64>) {
    (Ratio::new(1, 4) - Ratio::new(3, 4 * d), Ratio::new(1, d))
}

/// Largest degree the schedule supports; `k^k` still fits in a `u64`.
pub const MAX_SCHEDULE_K: u32 = 12;

/// One row of the multi-scale schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub k: u32,
    /// `log2 n_k = k^k`, exact.
    pub log2_n_k: u64,
    /// `ln m_k` with `m_k = n_k^{k/(α−β)}` kept real-valued.
    pub log_m_k: f64,
    /// Nearest integer to `m_k` when it is representable, else `None`.
    pub m_k_rounded: Option<f64>,
    /// `ln t_k` with `t_k = c_Y m_k^{α−β} / (2 C_X n_k)`.
    pub log_t_k: f64,
    /// `β/(α−β) + α/((k−1)(α−β))`; undefined at `k = 1`.
    pub effective_exponent: Option<f64>,
    /// `ln` of the certified distance `(c_Y m_k^{-β} − 2 C^Y n_k Σ_{l>k} 1/n_l) / (2 C_Z n_k)`
    /// when the bracket is positive.
    pub log_distance_bound: Option<f64>,
}

/// The schedule `n_k = 2^(k^k)`, `m_k = n_k^{k/(α−β)}`, `t_k` for `k = 1..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
}

pub fn build_schedule(params: &SeparationParams, k_max: u32) -> Result<Schedule, SeparationError> {
    params.validate()?;
    if params.beta >= params.alpha / 2.0 {
        return Err(SeparationError::ScheduleInapplicable {
            alpha: params.alpha,
            beta: params.beta,
            boundary: params.beta == params.alpha / 2.0,
        });
    }
    if k_max == 0 || k_max > MAX_SCHEDULE_K {
        return Err(SeparationError::OutOfRange { k: k_max, min: 1, max: MAX_SCHEDULE_K });
    }
    let gap = params.alpha - params.beta;
    let base = params.exponent();
    let ln2 = std::f64::consts::LN_2;
    let entries = (1..=k_max)
        .map(|k| {
            let log2_n_k = (k as u64).pow(k);
            let log_n_k = log2_n_k as f64 * ln2;
            let log_m_k = (k as f64 / gap) * log_n_k;
            let m_k_rounded = (log_m_k < 53.0 * ln2).then(|| log_m_k.exp().round());
            let log_t_k = (params.c_slow / (2.0 * params.c_fast)).ln() + (k as f64 - 1.0) * log_n_k;
            let effective_exponent =
                (k >= 2).then(|| base + params.alpha / ((k as f64 - 1.0) * gap));
            let log_distance_bound = distance_bound(params, k, log_n_k, log_m_k);
            ScheduleEntry {
                k,
                log2_n_k,
                log_m_k,
                m_k_rounded,
                log_t_k,
                effective_exponent,
                log_distance_bound,
            }
        })
        .collect();
    Ok(Schedule { entries })
}

fn distance_bound(p: &SeparationParams, k: u32, log_n_k: f64, log_m_k: f64) -> Option<f64> {
    let ln2 = std::f64::consts::LN_2;
    let log_lead = p.c_slow.ln() - p.beta * log_m_k;
    let log_tail = if k <= MAX_TAIL_K {
        tail_sum_bound(k).ok()?.log2_value * ln2
    } else {
        // n_k Σ_{l>k} 1/n_l ≤ 2 n_k^{-k}
        ln2 - k as f64 * log_n_k
    };
    let log_penalty = (2.0 * p.c_slow_upper).ln() + log_tail;
    if log_penalty >= log_lead {
        return None;
    }
    // ln(e^a − e^b) = a + ln(1 − e^{b−a})
    let log_bracket = log_lead + (-(log_penalty - log_lead).exp()).ln_1p();
    Some(log_bracket - (2.0 * p.c_ambient).ln() - log_n_k)
}

/// Largest `k` accepted by [`tail_sum_bound`].
pub const MAX_TAIL_K: u32 = 8;

/// Rigorous upper bound on `n_k · Σ_{l>k} 1/n_l` for `n_l = 2^(l^l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub k: u32,
    /// `log2` of the bound.
    pub log2_value: f64,
}

impl TailBound {
    /// The bound as an `f64`; underflows to zero for `k ≥ 4`.
    pub fn value(&self) -> f64 {
        self.log2_value.exp2()
    }

    /// Whether the bound is at most `2 n_k^{-k}`.
    pub fn dominated(&self) -> bool {
        self.log2_value <= 1.0 - (self.k as f64) * (self.k as u64).pow(self.k) as f64
    }
}

pub fn tail_sum_bound(k: u32) -> Result<TailBound, SeparationError> {
    if !(1..=MAX_TAIL_K).contains(&k) {
        return Err(SeparationError::OutOfRange { k, min: 1, max: MAX_TAIL_K });
    }
    let k64 = k as u64;
    let e_k = k64.pow(k);
    let e_next = (k64 + 1).pow(k + 1);
    let e_after = (k64 + 2).pow(k + 2);
    // Σ_{l>k} 2^{-l^l} = 2^{-e_next} (1 + r), and consecutive exponents grow by
    // at least one, so r ≤ 2 · 2^{-(e_after - e_next)}.
    let r = 2.0 * (-((e_after - e_next) as f64)).exp2();
    // log2(1 + r) ≤ r / ln 2
    let log2_value = e_k as f64 - e_next as f64 + r / std::f64::consts::LN_2;
    Ok(TailBound { k, log2_value })
}

/// Inductive sign choice for the multi-scale sum `Σ ε_k y_{m_k} / n_k`.
///
/// `eval(j, signs)` must return the value of the `j`-th functional on the
/// partial sum built from `signs` (length `j`). The sign for index `j` is `+1`
/// when that value is nonnegative and `-1` otherwise.
pub fn assign_signs<F>(count: usize, mut eval: F) -> Vec<i8>
where
    F: FnMut(usize, &[i8]) -> f64,
{
    let mut signs = Vec::with_capacity(count);
    for j in 0..count {
        let v = eval(j, &signs);
        signs.push(if v >= 0.0 { 1 } else { -1 });
    }
    signs
}
