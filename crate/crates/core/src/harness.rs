//! Batch workloads: the randomized inequality harness and the 2×2 example sweep.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::StochasticMatrix;
use crate::decomposition::{channel_entropy_classical, minimize_f_closed_form, CLOSED_FORM_AGREEMENT, GAP_TOL};
use crate::error::{Error, Result};
use crate::exec::{map_collect, Execution};
use crate::sampling::random_stochastic;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomConfig {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    /// Round every sampled row to its most likely outcome.
    pub deterministic: bool,
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self { n: 2, count: 1000, seed: DEFAULT_SEED, deterministic: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomSummary {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub failures: usize,
    /// Indices of trials with `d(ρ_T) − H(T) < −GAP_TOL`.
    pub failed_trials: Vec<usize>,
}

/// Draws `count` matrices from one seeded stream (so the sample does not
/// depend on the execution mode) and checks `d(ρ_T) ≥ H(T)` on each.
pub fn sample_matrices(cfg: &RandomConfig) -> Vec<StochasticMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count)
        .map(|_| {
            let s = random_stochastic(&mut rng, cfg.n);
            if cfg.deterministic {
                round_to_deterministic(&s)
            } else {
                s
            }
        })
        .collect()
}

fn round_to_deterministic(s: &StochasticMatrix) -> StochasticMatrix {
    let n = s.dim();
    let rows = s
        .rows()
        .iter()
        .map(|row| {
            let best = (0..n).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap_or(0);
            (0..n).map(|j| if j == best { 1.0 } else { 0.0 }).collect()
        })
        .collect();
    StochasticMatrix::new(rows).expect("0/1 rows are stochastic")
}

pub fn run_random(cfg: &RandomConfig, exec: Execution) -> Result<RandomSummary> {
    if cfg.count == 0 {
        return Err(Error::Validation("count must be at least 1".into()));
    }
    let matrices = sample_matrices(cfg);
    let gaps: Vec<f64> = map_collect(&matrices, exec, |s| channel_entropy_classical(s).map(|r| r.gap))
        .into_iter()
        .collect::<Result<_>>()?;
    let failed_trials: Vec<usize> = gaps.iter().enumerate().filter(|(_, &g)| g < -GAP_TOL).map(|(i, _)| i).collect();
    Ok(RandomSummary {
        n: cfg.n,
        count: cfg.count,
        seed: cfg.seed,
        min_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
        max_gap: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        failures: failed_trials.len(),
        failed_trials,
    })
}

/// One row of the `p + q = 1` example sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub h_closed_form: f64,
    pub h_vertex: f64,
    pub d_choi: f64,
    pub gap: f64,
}

impl SweepRow {
    /// Both `H` columns agree and the inequality is strict.
    pub fn consistent(&self) -> bool {
        (self.h_closed_form - self.h_vertex).abs() <= CLOSED_FORM_AGREEMENT && self.gap > 0.0
    }
}

pub fn example_row(p: f64) -> Result<SweepRow> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Validation(format!("p = {p} is outside (0, 1)")));
    }
    let q = 1.0 - p;
    let report = channel_entropy_classical(&StochasticMatrix::binary(p, q)?)?;
    Ok(SweepRow {
        p,
        h_closed_form: minimize_f_closed_form(p, q)?.nats(),
        h_vertex: report.h_channel.nats(),
        d_choi: report.d_choi.nats(),
        gap: report.gap,
    })
}

/// Grid `p = start + k·step` for `p ≤ stop`, keeping only `p ∈ (0, 1)`.
pub fn sweep_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || step.is_infinite() {
        return Err(Error::Validation(format!("sweep step must be positive, got {step}")));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(Error::Validation("sweep bounds must be finite".into()));
    }
    let count = ((stop - start) / step + 1e-9).floor();
    if count < 0.0 {
        return Ok(Vec::new());
    }
    Ok((0..=count as usize)
        .map(|k| start + k as f64 * step)
        .filter(|&p| p > 0.0 && p < 1.0)
        .collect())
}

pub fn example_sweep(grid: &[f64], exec: Execution) -> Result<Vec<SweepRow>> {
    map_collect(grid, exec, |&p| example_row(p)).into_iter().collect()
}
