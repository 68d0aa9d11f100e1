//! Deterministic parallel Monte Carlo: rejection-rate estimation,
//! empirical threshold estimation, and sub-uniformity scans.
//!
//! Reproducibility contract: results depend on (seed, reps, chunks)
//! only. Replicate chunk k always uses RNG stream k, so the worker
//! count never changes the answer; per-chunk tallies are combined in
//! chunk order with integer arithmetic wherever possible.

use rayon::prelude::*;

use crate::copula::CopulaModel;
use crate::error::{Error, Result};
use crate::merge::{merge_slice, MergeStatistic};
use crate::rng::RandomStream;
use crate::specfun::{normal_quantile, reg_inc_beta};

/// Execution plan for a Monte Carlo run.
#[derive(Debug, Clone, Copy)]
pub struct SimulationPlan {
    pub seed: u64,
    pub reps: u64,
    pub chunks: u32,
    /// Confidence level for intervals, e.g. 0.99.
    pub level: f64,
}

impl SimulationPlan {
    pub fn new(seed: u64, reps: u64) -> Self {
        SimulationPlan { seed, reps, chunks: 64, level: 0.99 }
    }

    pub fn with_chunks(mut self, chunks: u32) -> Self {
        self.chunks = chunks;
        self
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Precondition("reps must be positive".into()));
        }
        if self.chunks == 0 {
            return Err(Error::Precondition("chunks must be positive".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::domain(format!(
                "confidence level must be in (0,1), got {}",
                self.level
            )));
        }
        Ok(())
    }

    /// Rep count for chunk k: balanced split of reps over chunks.
    fn chunk_len(&self, k: u32) -> u64 {
        let q = self.reps / self.chunks as u64;
        let r = self.reps % self.chunks as u64;
        q + if (k as u64) < r { 1 } else { 0 }
    }
}

/// A point estimate with a two-sided confidence interval.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    /// Binomial standard error for proportions; half the CI width for
    /// quantile estimates.
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub reps: u64,
    pub seed: u64,
    pub level: f64,
}

/// Verdict of a sub-uniformity check at a single p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// CI entirely above p: the statistic rejects more often than p.
    SubUniform,
    /// CI entirely below p.
    SuperUniform,
    /// CI straddles p.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::SubUniform => "sub-uniform",
            Verdict::SuperUniform => "super-uniform",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// One row of a sub-uniformity scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub p: f64,
    pub estimate: Estimate,
    pub verdict: Verdict,
}

fn normal_z(level: f64) -> f64 {
    normal_quantile(0.5 + level / 2.0).expect("level validated")
}

/// Wilson score interval for k successes in n trials.
fn wilson(k: u64, n: u64, level: f64) -> (f64, f64) {
    let z = normal_z(level);
    let nf = n as f64;
    let phat = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = z * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn check_dims(stat: &MergeStatistic, model: &CopulaModel) -> Result<()> {
    if let Some(d) = stat.dimension() {
        if d != model.dimension() {
            return Err(Error::shape(format!(
                "statistic dimension {d} does not match copula dimension {}",
                model.dimension()
            )));
        }
    }
    Ok(())
}

fn sample_loop<T: Send + Sync>(
    plan: &SimulationPlan,
    model: &CopulaModel,
    stat: &MergeStatistic,
    init: impl Fn() -> T + Sync,
    update: impl Fn(&mut T, f64) + Sync,
) -> Result<Vec<T>> {
    let dim = model.dimension();
    let tallies: Vec<Result<T>> = (0..plan.chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = RandomStream::new(plan.seed, k as u64);
            let mut buf = Vec::with_capacity(dim);
            let mut scratch = Vec::new();
            let mut acc = init();
            for _ in 0..plan.chunk_len(k) {
                buf.clear();
                model.sample_into(&mut rng, &mut buf);
                let m = merge_slice(stat, &buf, &mut scratch)?;
                update(&mut acc, m);
            }
            Ok(acc)
        })
        .collect();
    tallies.into_iter().collect()
}

/// Estimate R_n(p) = P(M ≤ p) under `model` with a Wilson interval.
pub fn estimate_rn(
    plan: &SimulationPlan,
    model: &CopulaModel,
    stat: &MergeStatistic,
    p: f64,
) -> Result<Estimate> {
    plan.validate()?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must be in (0,1), got {p}")));
    }
    check_dims(stat, model)?;
    let counts = sample_loop(plan, model, stat, || 0u64, |c, m| {
        if m <= p {
            *c += 1;
        }
    })?;
    let hits: u64 = counts.iter().sum();
    let (lo, hi) = wilson(hits, plan.reps, plan.level);
    let value = hits as f64 / plan.reps as f64;
    Ok(Estimate {
        value,
        stderr: (value * (1.0 - value) / plan.reps as f64).sqrt(),
        ci_low: lo,
        ci_high: hi,
        reps: plan.reps,
        seed: plan.seed,
        level: plan.level,
    })
}

/// Estimate the empirical p-quantile of M under `model`, i.e. the
/// largest threshold a with P(M ≤ a) ≈ p, with an order-statistic CI.
///
/// Requires reps ≥ 10/p so the tail holds enough points.
pub fn estimate_threshold(
    plan: &SimulationPlan,
    model: &CopulaModel,
    stat: &MergeStatistic,
    p: f64,
) -> Result<Estimate> {
    plan.validate()?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must be in (0,1), got {p}")));
    }
    check_dims(stat, model)?;
    if (plan.reps as f64) * p < 10.0 {
        return Err(Error::Precondition(format!(
            "need reps >= 10/p for a stable quantile (reps = {}, p = {p})",
            plan.reps
        )));
    }
    // Keep per-chunk sorted tails of the smallest values up to rank
    // ceil(reps*p) plus CI slack, then merge; the k-th smallest overall
    // lies among the k smallest of each chunk.
    let mean = plan.reps as f64 * p;
    let slack = 6.0 * (mean * (1.0 - p)).sqrt() + 64.0;
    let keep = ((mean + slack).ceil() as usize).min(plan.reps as usize);
    let chunks = sample_loop(
        plan,
        model,
        stat,
        Vec::<f64>::new,
        |tail, m| {
            tail.push(m);
        },
    )?;
    let mut pooled: Vec<f64> = Vec::with_capacity(keep * chunks.len().min(plan.chunks as usize));
    for mut tail in chunks {
        tail.sort_by(|a, b| a.partial_cmp(b).unwrap());
        tail.truncate(keep);
        pooled.extend_from_slice(&tail);
    }
    pooled.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let n = plan.reps;
    let k = ((n as f64) * p).ceil() as u64; // rank of the quantile estimate (1-based)
    let value = pooled[(k - 1) as usize];
    let (lo_rank, hi_rank) = order_stat_ci(n, p, plan.level);
    let ci_low = pooled[(lo_rank - 1) as usize];
    let ci_high = pooled[((hi_rank - 1) as usize).min(pooled.len() - 1)];
    Ok(Estimate {
        value,
        stderr: 0.5 * (ci_high - ci_low),
        ci_low,
        ci_high,
        reps: n,
        seed: plan.seed,
        level: plan.level,
    })
}

/// Binomial CDF P(Bin(n, p) ≤ k) via the regularized incomplete beta.
fn binom_cdf(k: u64, n: u64, p: f64) -> f64 {
    if k >= n {
        return 1.0;
    }
    reg_inc_beta((n - k) as f64, (k + 1) as f64, 1.0 - p).expect("valid beta args")
}

/// Distribution-free CI ranks (1-based, inclusive) for the p-quantile:
/// smallest [lo, hi] with P(X_(lo) ≤ q_p ≤ X_(hi)) ≥ level.
fn order_stat_ci(n: u64, p: f64, level: f64) -> (u64, u64) {
    let alpha = 1.0 - level;
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    // largest lo with P(X_(lo) > q_p) = P(Bin <= lo-1) <= alpha/2
    let mut lo = ((mean - 6.0 * sd).floor().max(1.0)) as u64;
    while lo > 1 && binom_cdf(lo - 1, n, p) > alpha / 2.0 {
        lo -= 1;
    }
    while lo < n && binom_cdf(lo, n, p) <= alpha / 2.0 {
        lo += 1;
    }
    // P(X_(hi) < q_p) <= P(Bin >= hi) = 1 - P(Bin <= hi-1) <= alpha/2
    let mut hi = ((mean + 6.0 * sd).ceil()) as u64;
    if hi > n {
        hi = n;
    }
    while hi > 1 && 1.0 - binom_cdf(hi - 2, n, p) <= alpha / 2.0 {
        hi -= 1;
    }
    while hi < n && 1.0 - binom_cdf(hi - 1, n, p) > alpha / 2.0 {
        hi += 1;
    }
    (lo.min(hi), hi)
}

/// Scan sub-uniformity of `stat` under `model` across the given p grid,
/// using one sample pass shared by all grid points.
pub fn scan_subuniformity(
    plan: &SimulationPlan,
    model: &CopulaModel,
    stat: &MergeStatistic,
    grid: &[f64],
) -> Result<Vec<ScanRow>> {
    plan.validate()?;
    if grid.is_empty() {
        return Err(Error::Precondition("p grid must be nonempty".into()));
    }
    for &p in grid {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("grid point must be in (0,1), got {p}")));
        }
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("p grid must be strictly increasing".into()));
    }
    check_dims(stat, model)?;
    let sorted: &[f64] = grid;
    let tallies = sample_loop(
        plan,
        model,
        stat,
        || vec![0u64; sorted.len()],
        |counts, m| {
            // tally into the first grid cell whose p is >= m
            let idx = sorted.partition_point(|&g| g < m);
            if idx < counts.len() {
                counts[idx] += 1;
            }
        },
    )?;
    let mut hist = vec![0u64; sorted.len()];
    for t in &tallies {
        for (h, v) in hist.iter_mut().zip(t) {
            *h += v;
        }
    }
    // cumulative: hits at grid point i = count of m <= sorted[i]
    let mut cum = 0u64;
    let cum_hits: Vec<u64> = hist
        .iter()
        .map(|&h| {
            cum += h;
            cum
        })
        .collect();
    let rows = sorted
        .iter()
        .zip(&cum_hits)
        .map(|(&p, &hits)| {
            let (lo, hi) = wilson(hits, plan.reps, plan.level);
            let value = hits as f64 / plan.reps as f64;
            let est = Estimate {
                value,
                stderr: (value * (1.0 - value) / plan.reps as f64).sqrt(),
                ci_low: lo,
                ci_high: hi,
                reps: plan.reps,
                seed: plan.seed,
                level: plan.level,
            };
            let verdict = if lo > p {
                Verdict::SubUniform
            } else if hi < p {
                Verdict::SuperUniform
            } else {
                Verdict::Inconclusive
            };
            ScanRow { p, estimate: est, verdict }
        })
        .collect();
    Ok(rows)
}
