//! The regularly varying interval `T` and the Poisson-mixed in-degree `N(T)`.
//!
//! `N(T)` counts arrivals of a unit-rate Poisson process during an
//! independent interval `T`. When `T` has CCDF `x^{-α} L(x)`, so does
//! `N(T)`; with `E T = d` also `E N(T) = d`.

use rand::Rng;
use rand_distr::{Distribution, Exp, Pareto, Poisson};
use rayon::prelude::*;

use crate::error::{param, Result};
use crate::sample::{SampleSet, SampleSource};
use crate::scalar::Scalar;
use crate::seed;

/// Draws per RNG stream when sampling in parallel.
pub(crate) const CHUNK: usize = 1 << 14;

/// Slowly varying factor `L` in the tail `x^{-α} L(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlowlyVarying {
    /// Pure Pareto: CCDF `(x/m)^{-α}` for `x ≥ m`.
    Constant,
    /// CCDF `(x/m)^{-α} (1 + ln(x/m))` for `x ≥ m`.
    Logarithmic,
}

/// Law of the interval `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSpec<F> {
    pub alpha: F,
    pub x_scale: F,
    pub slowly_varying: SlowlyVarying,
}

impl<F: Scalar> TailSpec<F> {
    pub fn new(alpha: F, x_scale: F, slowly_varying: SlowlyVarying) -> Result<Self> {
        if !(alpha > F::one()) || !alpha.is_finite() {
            return param(format!("tail index alpha must exceed 1, got {alpha}"));
        }
        if !(x_scale > F::zero()) || !x_scale.is_finite() {
            return param(format!("x_scale must be positive, got {x_scale}"));
        }
        Ok(Self { alpha, x_scale, slowly_varying })
    }

    /// Spec with the scale chosen so that `E T = d`.
    pub fn calibrated(alpha: F, d: F, slowly_varying: SlowlyVarying) -> Result<Self> {
        if !(alpha > F::one()) {
            return param(format!("tail index alpha must exceed 1, got {alpha}"));
        }
        if !(d > F::zero()) {
            return param(format!("mean d must be positive, got {d}"));
        }
        let scale = d / mean_per_unit_scale(alpha, slowly_varying);
        Self::new(alpha, scale, slowly_varying)
    }

    pub fn mean(&self) -> F {
        self.x_scale * mean_per_unit_scale(self.alpha, self.slowly_varying)
    }

    /// `P(T ≥ x)`.
    pub fn ccdf(&self, x: F) -> F {
        if x <= self.x_scale {
            return F::one();
        }
        let u = x / self.x_scale;
        let base = u.powf(-self.alpha);
        match self.slowly_varying {
            SlowlyVarying::Constant => base,
            SlowlyVarying::Logarithmic => base * (F::one() + u.ln()),
        }
    }

    /// One draw, by inversion of the CCDF.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let alpha = self.alpha.to_f64_lossy();
        let scale = self.x_scale.to_f64_lossy();
        match self.slowly_varying {
            SlowlyVarying::Constant => Pareto::new(scale, alpha).expect("validated spec").sample(rng),
            SlowlyVarying::Logarithmic => {
                // U ∈ (0, 1]
                let u: f64 = 1.0 - rng.random::<f64>();
                scale * invert_log_tail(alpha, u.ln()).exp()
            }
        }
    }
}

fn mean_per_unit_scale<F: Scalar>(alpha: F, sv: SlowlyVarying) -> F {
    let one = F::one();
    let excess = alpha - one;
    match sv {
        SlowlyVarying::Constant => alpha / excess,
        SlowlyVarying::Logarithmic => one + one / excess + one / (excess * excess),
    }
}

/// Solves `-α v + ln(1 + v) = log_u` for `v = ln(x/m) ≥ 0`.
///
/// The left side is strictly decreasing and concave; the root lies in
/// `[-log_u/α, -log_u/(α-1)]`.
fn invert_log_tail(alpha: f64, log_u: f64) -> f64 {
    if log_u >= 0.0 {
        return 0.0;
    }
    let g = |v: f64| -alpha * v + v.ln_1p() - log_u;
    let mut lo = -log_u / alpha;
    let mut hi = -log_u / (alpha - 1.0);
    let mut v = lo;
    for _ in 0..100 {
        let gv = g(v);
        if gv.abs() <= 1e-15 * (1.0 + log_u.abs()) {
            return v;
        }
        if gv > 0.0 {
            lo = v;
        } else {
            hi = v;
        }
        let step = gv / (-alpha + 1.0 / (1.0 + v));
        let next = v - step;
        v = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
    }
    v
}

/// Law of `T` used by an in-degree model. Besides the regularly varying
/// family, degenerate and exponential intervals are available for
/// cross-checks with closed-form answers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalLaw<F> {
    Regular(TailSpec<F>),
    Deterministic(F),
    Exponential { mean: F },
}

impl<F: Scalar> IntervalLaw<F> {
    pub fn mean(&self) -> F {
        match *self {
            IntervalLaw::Regular(spec) => spec.mean(),
            IntervalLaw::Deterministic(t) => t,
            IntervalLaw::Exponential { mean } => mean,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            IntervalLaw::Regular(spec) => spec.draw(rng),
            IntervalLaw::Deterministic(t) => t.to_f64_lossy(),
            IntervalLaw::Exponential { mean } => {
                Exp::new(1.0 / mean.to_f64_lossy()).expect("positive mean").sample(rng)
            }
        }
    }
}

/// `N(T)` with a unit-rate Poisson process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InDegreeModel<F> {
    pub interval: IntervalLaw<F>,
}

impl<F: Scalar> InDegreeModel<F> {
    pub fn new(tail: TailSpec<F>) -> Self {
        Self { interval: IntervalLaw::Regular(tail) }
    }

    pub fn with_interval(interval: IntervalLaw<F>) -> Result<Self> {
        match interval {
            IntervalLaw::Regular(spec) => {
                TailSpec::new(spec.alpha, spec.x_scale, spec.slowly_varying)?;
            }
            IntervalLaw::Deterministic(t) if !(t >= F::zero()) || !t.is_finite() => {
                return param(format!("deterministic interval must be finite and ≥ 0, got {t}"));
            }
            IntervalLaw::Exponential { mean } if !(mean > F::zero()) || !mean.is_finite() => {
                return param(format!("exponential mean must be positive, got {mean}"));
            }
            _ => {}
        }
        Ok(Self { interval })
    }

    /// Pareto-type model calibrated so that `E N(T) = E T = d`.
    pub fn calibrated(alpha: F, d: F, slowly_varying: SlowlyVarying) -> Result<Self> {
        Ok(Self::new(TailSpec::calibrated(alpha, d, slowly_varying)?))
    }

    /// Draws the interval, returning it alongside the count.
    pub fn draw_with_interval<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, u64) {
        let t = self.interval.draw(rng);
        (t, poisson(t, rng))
    }
}

/// Exact Poisson variate (Knuth's product method for small means, rejection
/// for large ones; no normal approximation anywhere).
fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(p) => p.sample(rng) as u64,
        // Only reachable for means beyond ~1.8e19, where the relative
        // Poisson spread is below f64 resolution anyway.
        Err(_) => mean.round() as u64,
    }
}

/// Source of in-degrees for the fixed-point iteration.
pub trait InDegreeSampler: Sync {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64;

    /// `E N`, used for diagnostics and mean checks.
    fn mean(&self) -> f64;

    fn describe(&self) -> String;
}

impl<F: Scalar> InDegreeSampler for InDegreeModel<F> {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.draw_with_interval(rng).1
    }

    fn mean(&self) -> f64 {
        self.interval.mean().to_f64_lossy()
    }

    fn describe(&self) -> String {
        match self.interval {
            IntervalLaw::Regular(s) => {
                format!("N(T), T regular alpha={} x_scale={} L={:?}", s.alpha, s.x_scale, s.slowly_varying)
            }
            IntervalLaw::Deterministic(t) => format!("N(T), T={t}"),
            IntervalLaw::Exponential { mean } => format!("N(T), T~Exp(mean={mean})"),
        }
    }
}

/// Every page has in-degree exactly `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedInDegree(pub u64);

impl InDegreeSampler for FixedInDegree {
    fn draw<R: Rng + ?Sized>(&self, _rng: &mut R) -> u64 {
        self.0
    }

    fn mean(&self) -> f64 {
        self.0 as f64
    }

    fn describe(&self) -> String {
        format!("N={}", self.0)
    }
}

/// Mean `m` of a Pareto(α, m) variable equal to `d`: `m = d (α − 1) / α`.
pub fn pareto_scale_for_mean<F: Scalar>(alpha: F, d: F) -> Result<F> {
    if !(alpha > F::one()) {
        return param(format!("alpha must exceed 1 for a finite mean, got {alpha}"));
    }
    if !(d > F::zero()) {
        return param(format!("d must be positive, got {d}"));
    }
    Ok(d * (alpha - F::one()) / alpha)
}

/// Fills `n` values in parallel, `CHUNK` per stream of `master`.
pub(crate) fn parallel_draws<F, G>(n: usize, master: u64, draw: G) -> Vec<F>
where
    F: Scalar,
    G: Fn(&mut rand_chacha::ChaCha8Rng) -> F + Sync,
{
    let mut out = vec![F::zero(); n];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(i, chunk)| {
        let mut rng = seed::stream_rng(master, i as u64);
        for slot in chunk {
            *slot = draw(&mut rng);
        }
    });
    out
}

/// `n` i.i.d. draws of `T`.
pub fn sample_t<F: Scalar>(spec: &TailSpec<F>, n: usize, seed: u64) -> Result<SampleSet<F>> {
    let spec = TailSpec::new(spec.alpha, spec.x_scale, spec.slowly_varying)?;
    if n == 0 {
        return param("sample size must be at least 1");
    }
    let master = seed::derive(seed, seed::label::T_DRAWS);
    let values = parallel_draws(n, master, |rng| F::lit(spec.draw(rng)));
    Ok(SampleSet::new(
        SampleSource::Interval,
        Some(seed),
        format!("alpha={} x_scale={} L={:?}", spec.alpha, spec.x_scale, spec.slowly_varying),
        values,
    ))
}

/// `n` i.i.d. draws of `N(T)`; values are nonnegative integers.
pub fn sample_in_degree<F: Scalar>(model: &InDegreeModel<F>, n: usize, seed: u64) -> Result<SampleSet<F>> {
    let model = InDegreeModel::with_interval(model.interval)?;
    if n == 0 {
        return param("sample size must be at least 1");
    }
    let master = seed::derive(seed, seed::label::IN_DEGREE);
    let values = parallel_draws(n, master, |rng| F::from_u64(model.draw(rng)).expect("count"));
    Ok(SampleSet::new(SampleSource::InDegree, Some(seed), model.describe(), values))
}
