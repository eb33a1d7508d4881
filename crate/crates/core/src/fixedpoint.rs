//! Monte-Carlo solution of `R = (c/d) Σ_{j=1}^{N} R_j + (1−c)`.
//!
//! The law of `R` is approximated by a pool of samples. Each generation
//! builds a new pool: for every output an in-degree `N` is drawn, `N` parents
//! are picked uniformly with replacement from the previous pool, and the
//! right-hand side is evaluated. The map contracts as long as `c/d < 1`.
//! Pools start from the degenerate solution `R ≡ 1`.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::rvmodel::{InDegreeSampler, CHUNK};
use crate::sample::{SampleSet, SampleSource};
use crate::scalar::Scalar;
use crate::seed;

/// Damping `c`, fixed out-degree `d` and tail index `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<F> {
    pub c: F,
    pub d: F,
    pub alpha: F,
}

impl<F: Scalar> ModelParams<F> {
    pub fn new(c: F, d: F, alpha: F) -> Result<Self> {
        if !(c > F::zero() && c < F::one()) {
            return param(format!("damping c must lie in (0, 1), got {c}"));
        }
        if !(d > F::one()) || !d.is_finite() {
            return param(format!("out-degree d must exceed 1, got {d}"));
        }
        if !(alpha > F::zero()) || !alpha.is_finite() {
            return param(format!("tail index alpha must be positive, got {alpha}"));
        }
        Ok(Self { c, d, alpha })
    }

    /// `c/d`, the contraction ratio of the recursion.
    pub fn ratio(&self) -> F {
        self.c / self.d
    }

    /// `1 − c`, the support floor of `R`.
    pub fn floor(&self) -> F {
        F::one() - self.c
    }
}

/// Current approximation of the law of `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationPool<F> {
    pub samples: Vec<F>,
    pub generation: usize,
}

impl<F: Scalar> GenerationPool<F> {
    /// `R⁽⁰⁾ ≡ 1`.
    pub fn initial(size: usize) -> Self {
        Self { samples: vec![F::one(); size], generation: 0 }
    }

    pub fn mean(&self) -> F {
        self.samples.iter().copied().sum::<F>() / F::from_count(self.samples.len())
    }
}

/// Produces the next generation of the pool.
pub fn iterate_generation<F, S>(
    pool: &GenerationPool<F>,
    params: &ModelParams<F>,
    in_degree: &S,
    pool_size: usize,
    seed: u64,
) -> Result<GenerationPool<F>>
where
    F: Scalar,
    S: InDegreeSampler,
{
    if pool.samples.is_empty() {
        return Err(Error::State("cannot resample from an empty pool".into()));
    }
    if pool_size == 0 {
        return param("pool size must be at least 1");
    }
    let parents = &pool.samples;
    let ratio = params.ratio();
    let floor = params.floor();
    let mut next = vec![F::zero(); pool_size];
    next.par_chunks_mut(CHUNK).enumerate().for_each(|(i, chunk)| {
        let mut rng = seed::stream_rng(seed, i as u64);
        for slot in chunk {
            let k = in_degree.draw(&mut rng);
            let mut sum = F::zero();
            for _ in 0..k {
                sum = sum + parents[rng.random_range(0..parents.len())];
            }
            *slot = ratio * sum + floor;
        }
    });
    Ok(GenerationPool { samples: next, generation: pool.generation + 1 })
}

/// Knobs of [`solve_r`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub pool_size: usize,
    pub generations: usize,
    /// Largest acceptable Kolmogorov–Smirnov distance between the last two
    /// generations.
    pub ks_threshold: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { pool_size: 1_000_000, generations: 30, ks_threshold: 0.005 }
    }
}

/// Per-generation record kept for auditing heavy-tailed runs.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationDiagnostics {
    pub generation: usize,
    pub mean: f64,
    /// KS distance to the previous generation.
    pub ks: f64,
    pub max: f64,
    /// Ten largest values, descending.
    pub top: Vec<f64>,
}

/// Final pool of a fixed-point run plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RSolution<F> {
    pub samples: SampleSet<F>,
    pub diagnostics: Vec<GenerationDiagnostics>,
    pub ks_final: f64,
    /// `false` when `ks_final` exceeds the configured threshold. A warning,
    /// not an error: the samples are still returned.
    pub converged: bool,
}

impl<F: Scalar> RSolution<F> {
    /// CSV `generation,mean,ks,max`.
    pub fn write_diagnostics_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "generation,mean,ks,max")?;
        for d in &self.diagnostics {
            writeln!(out, "{},{},{},{}", d.generation, d.mean, d.ks, d.max)?;
        }
        Ok(())
    }
}

/// Two-sample Kolmogorov–Smirnov distance of sorted slices.
pub fn ks_distance<F: Scalar>(a: &[F], b: &[F]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0f64;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}

fn sorted_copy<F: Scalar>(v: &[F]) -> Vec<F> {
    let mut s = v.to_vec();
    s.par_sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in pool"));
    s
}

/// Iterates the pool `generations` times from `R⁽⁰⁾ ≡ 1`.
pub fn solve_r<F, S>(params: &ModelParams<F>, in_degree: &S, config: SolveConfig, seed: u64) -> Result<RSolution<F>>
where
    F: Scalar,
    S: InDegreeSampler,
{
    if config.generations == 0 {
        return param("at least one generation is required");
    }
    if config.pool_size < 1000 {
        return param(format!("pool size must be at least 1000, got {}", config.pool_size));
    }
    let master = seed::derive(seed, seed::label::FIXED_POINT);
    let mut pool = GenerationPool::initial(config.pool_size);
    let mut prev_sorted = pool.samples.clone();
    let mut diagnostics = Vec::with_capacity(config.generations);
    for g in 0..config.generations {
        pool = iterate_generation(&pool, params, in_degree, config.pool_size, seed::derive(master, g as u64))?;
        let sorted = sorted_copy(&pool.samples);
        let ks = ks_distance(&prev_sorted, &sorted);
        diagnostics.push(GenerationDiagnostics {
            generation: pool.generation,
            mean: pool.mean().to_f64_lossy(),
            ks,
            max: sorted.last().copied().unwrap_or(F::nan()).to_f64_lossy(),
            top: sorted.iter().rev().take(10).map(|v| v.to_f64_lossy()).collect(),
        });
        prev_sorted = sorted;
    }
    let ks_final = diagnostics.last().map_or(f64::NAN, |d| d.ks);
    let spec = format!(
        "c={} d={} alpha={} pool={} generations={} in-degree: {}",
        params.c,
        params.d,
        params.alpha,
        config.pool_size,
        config.generations,
        in_degree.describe()
    );
    Ok(RSolution {
        samples: SampleSet::new(SampleSource::PageRankModel, Some(seed), spec, pool.samples),
        diagnostics,
        ks_final,
        converged: ks_final <= config.ks_threshold,
    })
}

/// `n` draws of `(1−c)((c/d) N + 1)`, which `R` stochastically dominates.
pub fn lower_bound_samples<F, S>(in_degree: &S, params: &ModelParams<F>, n: usize, seed: u64) -> Result<SampleSet<F>>
where
    F: Scalar,
    S: InDegreeSampler,
{
    if n == 0 {
        return param("sample size must be at least 1");
    }
    let master = seed::derive(seed, seed::label::LOWER_BOUND);
    let ratio = params.ratio();
    let floor = params.floor();
    let values = crate::rvmodel::parallel_draws(n, master, |rng| {
        let k = F::from_u64(in_degree.draw(rng)).expect("count");
        floor * (ratio * k + F::one())
    });
    Ok(SampleSet::new(
        SampleSource::LowerBound,
        Some(seed),
        format!("c={} d={} in-degree: {}", params.c, params.d, in_degree.describe()),
        values,
    ))
}
