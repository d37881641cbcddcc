//! Monte-Carlo checks of the continuous model of Algorithm B.
//!
//! Inputs are odd integers drawn uniformly from `[1, 2^e − 1]`. Samples are produced in
//! fixed-size chunks, chunk `c` drawing from the ChaCha8 stream `c` of the configured seed, so
//! results do not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::RandBigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::density::{F64Interp, GridFunction};
use crate::error::{Error, Result};
use crate::gcd::{gcd_binary_with, TraceDetail};
use crate::real::Real;

pub const HISTOGRAM_BINS: usize = 1024;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub bound_exponent: u32,
    pub sample_count: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bound_exponent < 4 {
            return Err(Error::Config("bound_exponent must be at least 4".into()));
        }
        if self.sample_count == 0 {
            return Err(Error::Config("sample_count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalStats {
    pub config: SampleConfig,
    pub mean_b3: f64,
    pub mean_shift_total: f64,
    /// `k ↦` count of subtract-shift steps with `Val₂(t) = k`, over all steps of all runs.
    /// Pooling all steps weights `k = 1` slightly above `1/2`.
    pub val2_counts: BTreeMap<u64, u64>,
    /// Relative frequencies of `val2_counts`.
    pub val2_histogram: BTreeMap<u64, f64>,
    /// Step whose shift is tallied in `val2_step_counts`.
    pub val2_step: usize,
    /// `k ↦` number of runs whose shift at step `val2_step` was `k`: one observation per run.
    pub val2_step_counts: BTreeMap<u64, u64>,
    /// `n ↦` normalized 1024-bin histogram of `x_n` over `[0, 1]`.
    pub ratio_histograms: BTreeMap<usize, Vec<f64>>,
    /// `n ↦` sorted samples of `x_n` (runs that finished before step `n` contribute nothing).
    #[serde(skip)]
    pub ratio_samples: BTreeMap<usize, Vec<f64>>,
}

struct ChunkStats {
    b3: u64,
    shifts: u64,
    val2: BTreeMap<u64, u64>,
    val2_step: BTreeMap<u64, u64>,
    ratios: Vec<Vec<f64>>,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Steps at which [`simulate`] records `x_n`.
pub const DEFAULT_STEPS: [usize; 6] = [0, 1, 2, 5, 8, 12];

pub fn simulate(cfg: &SampleConfig) -> Result<EmpiricalStats> {
    simulate_with_steps(cfg, &DEFAULT_STEPS)
}

/// Runs Algorithm B on `sample_count` random odd pairs, recording `x_n` for `n ∈ steps`.
pub fn simulate_with_steps(cfg: &SampleConfig, steps: &[usize]) -> Result<EmpiricalStats> {
    cfg.validate()?;
    let mut steps = steps.to_vec();
    steps.sort_unstable();
    steps.dedup();
    let val2_step = cfg.bound_exponent as usize / 4;
    let chunks = cfg.sample_count.div_ceil(CHUNK);
    let results: Vec<ChunkStats> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(cfg.seed, c as u64);
            let count = CHUNK.min(cfg.sample_count - c * CHUNK);
            let mut out = ChunkStats { b3: 0, shifts: 0, val2: BTreeMap::new(), val2_step: BTreeMap::new(), ratios: vec![Vec::new(); steps.len()] };
            for _ in 0..count {
                let u = rng.gen_biguint(cfg.bound_exponent as u64) | num_bigint::BigUint::from(1u8);
                let v = rng.gen_biguint(cfg.bound_exponent as u64) | num_bigint::BigUint::from(1u8);
                let (_, trace) = gcd_binary_with(&u, &v, TraceDetail::Full).expect("odd inputs are nonzero");
                out.b3 += trace.b3_count;
                out.shifts += trace.shift_total;
                for &j in &trace.shifts {
                    *out.val2.entry(j).or_default() += 1;
                }
                if let Some(&j) = trace.shifts.get(val2_step) {
                    *out.val2_step.entry(j).or_default() += 1;
                }
                for (slot, &n) in steps.iter().enumerate() {
                    if let Some((_, x)) = trace.ratio_snapshots.get(n) {
                        out.ratios[slot].push(x.to_f64().unwrap_or(f64::NAN));
                    }
                }
            }
            out
        })
        .collect();

    let mut b3 = 0u64;
    let mut shifts = 0u64;
    let mut val2_counts = BTreeMap::new();
    let mut val2_step_counts = BTreeMap::new();
    let mut ratio_samples: BTreeMap<usize, Vec<f64>> = steps.iter().map(|&n| (n, Vec::new())).collect();
    for chunk in results {
        b3 += chunk.b3;
        shifts += chunk.shifts;
        for (k, c) in chunk.val2 {
            *val2_counts.entry(k).or_default() += c;
        }
        for (k, c) in chunk.val2_step {
            *val2_step_counts.entry(k).or_default() += c;
        }
        for (slot, xs) in chunk.ratios.into_iter().enumerate() {
            ratio_samples.get_mut(&steps[slot]).expect("slot exists").extend(xs);
        }
    }
    let total: u64 = val2_counts.values().sum();
    let val2_histogram = val2_counts.iter().map(|(&k, &c)| (k, c as f64 / total.max(1) as f64)).collect();
    let mut ratio_histograms = BTreeMap::new();
    for (&n, xs) in ratio_samples.iter_mut() {
        xs.sort_by(f64::total_cmp);
        ratio_histograms.insert(n, histogram(xs));
    }
    let samples = cfg.sample_count as f64;
    Ok(EmpiricalStats {
        config: cfg.clone(),
        mean_b3: b3 as f64 / samples,
        mean_shift_total: shifts as f64 / samples,
        val2_counts,
        val2_histogram,
        val2_step,
        val2_step_counts,
        ratio_histograms,
        ratio_samples,
    })
}

fn histogram(xs: &[f64]) -> Vec<f64> {
    let mut bins = vec![0.0; HISTOGRAM_BINS];
    if xs.is_empty() {
        return bins;
    }
    for &x in xs {
        let i = ((x * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        bins[i] += 1.0;
    }
    let n = xs.len() as f64;
    bins.iter_mut().for_each(|b| *b /= n);
    bins
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub observations: u64,
}

/// Chi-square test of `counts` against `P(k) = 2^{-k}`, `k ≥ 1`. The last bin pools every
/// `k` from the first value whose expected count falls below 5.
pub fn chi_square_geometric(counts: &BTreeMap<u64, u64>) -> Result<ChiSquareTest> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::Config("no observations".into()));
    }
    let n = total as f64;
    let mut last = 1u64;
    while n * 2f64.powi(-(last as i32 + 1)) >= 5.0 {
        last += 1;
    }
    if last < 2 {
        return Err(Error::Config("too few observations for a chi-square test".into()));
    }
    let mut statistic = 0.0;
    for k in 1..=last {
        let observed: u64 = if k < last {
            counts.get(&k).copied().unwrap_or(0)
        } else {
            counts.range(last..).map(|(_, c)| c).sum()
        };
        let p = if k < last { 2f64.powi(-(k as i32)) } else { 2f64.powi(-(last as i32 - 1)) };
        let expected = n * p;
        statistic += (observed as f64 - expected).powi(2) / expected;
    }
    let df = last as usize - 1;
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquareTest { statistic, degrees_of_freedom: df, p_value: 1.0 - dist.cdf(statistic), observations: total })
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    /// Least-squares slope of `mean_b3` against the bound exponent.
    pub slope: f64,
    pub intercept: f64,
    /// Least-squares slope of `mean_shift_total`.
    pub shift_slope: f64,
    /// `(exponent, mean_b3, mean_shift_total)`.
    pub points: Vec<(u32, f64, f64)>,
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits `mean_b3 ≈ slope · e + intercept` over the given bound exponents.
pub fn iteration_slope(exponents: &[u32], base: &SampleConfig) -> Result<SlopeFit> {
    let mut distinct = exponents.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Config("iteration_slope needs at least two distinct exponents".into()));
    }
    let mut points = Vec::new();
    for &e in exponents {
        let stats = simulate_with_steps(&SampleConfig { bound_exponent: e, ..base.clone() }, &[])?;
        points.push((e, stats.mean_b3, stats.mean_shift_total));
    }
    let (slope, intercept) = least_squares(&points.iter().map(|p| (p.0 as f64, p.1)).collect::<Vec<_>>());
    let (shift_slope, _) = least_squares(&points.iter().map(|p| (p.0 as f64, p.2)).collect::<Vec<_>>());
    Ok(SlopeFit { slope, intercept, shift_slope, points })
}

/// Kolmogorov–Smirnov distance between the sorted `samples` and the distribution function `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// KS distance between the empirical `x_n` and `F = 1 − F̃` of `model`.
pub fn compare_distribution(stats: &EmpiricalStats, n: usize, model: &GridFunction) -> Result<f64> {
    let samples = stats
        .ratio_samples
        .get(&n)
        .ok_or_else(|| Error::Config(format!("step {n} was not recorded by the simulation")))?;
    if samples.is_empty() {
        return Err(Error::Config(format!("no run reached step {n}")));
    }
    let interp = F64Interp::new(&model.values_f64(), model.grid.h.to_f64(), model.r);
    let cdf = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        1.0 - interp.eval_y(-x.ln()).unwrap_or(1.0)
    };
    Ok(ks_distance(samples, cdf))
}

pub fn write_histogram_csv<W: Write>(stats: &EmpiricalStats, mut out: W) -> Result<()> {
    writeln!(out, "kind,key,bin_low,bin_high,frequency")?;
    for (k, f) in &stats.val2_histogram {
        writeln!(out, "val2,{k},,,{f}")?;
    }
    for (n, bins) in &stats.ratio_histograms {
        for (i, f) in bins.iter().enumerate() {
            let lo = i as f64 / HISTOGRAM_BINS as f64;
            let hi = (i + 1) as f64 / HISTOGRAM_BINS as f64;
            writeln!(out, "ratio,{n},{lo},{hi},{f}")?;
        }
    }
    Ok(())
}
