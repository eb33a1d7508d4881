//! Empirical tail analysis: CCDF tables and the maximum-likelihood (Hill)
//! tail index.

use std::io::Write;

use crate::error::{param, Error, Result};
use crate::sample::SampleSet;
use crate::scalar::Scalar;

/// Empirical complementary CDF, `p = P(X ≥ x)` at each distinct sample value.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdfTable<F> {
    points: Vec<(F, F)>,
}

impl<F: Scalar> CcdfTable<F> {
    /// Builds a table from explicit points. `x` must be strictly increasing
    /// and `p` non-increasing within `(0, 1]`.
    pub fn from_points(points: Vec<(F, F)>) -> Result<Self> {
        if points.is_empty() {
            return param("CCDF table needs at least one point");
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return param("CCDF x values must be strictly increasing");
            }
            if w[1].1 > w[0].1 {
                return param("CCDF p values must be non-increasing");
            }
        }
        if points.iter().any(|&(_, p)| !(p > F::zero() && p <= F::one())) {
            return param("CCDF p values must lie in (0, 1]");
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(F, F)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_x(&self) -> F {
        self.points[0].0
    }

    pub fn max_x(&self) -> F {
        self.points[self.points.len() - 1].0
    }

    /// `P(X ≥ x)`; zero beyond the largest sample.
    pub fn p_at(&self, x: F) -> F {
        let idx = self.points.partition_point(|&(xi, _)| xi < x);
        self.points.get(idx).map_or(F::zero(), |&(_, p)| p)
    }

    /// Smallest tabulated `x` with `P(X ≥ x) ≤ 1 − q`, or the largest `x` if
    /// the table never falls that low.
    pub fn upper_quantile(&self, q: F) -> F {
        let target = F::one() - q;
        let idx = self.points.partition_point(|&(_, p)| p > target);
        self.points.get(idx).map_or(self.max_x(), |&(x, _)| x)
    }

    /// Two-column CSV with header `x,p`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,p")?;
        for (x, p) in &self.points {
            writeln!(out, "{x},{p}")?;
        }
        Ok(())
    }

    /// Whitespace-separated `log10(x) log10(p)` for direct log-log plotting.
    /// Nonpositive `x` cannot be placed on a log axis and is skipped.
    pub fn write_loglog<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# log10(x) log10(p)")?;
        for &(x, p) in &self.points {
            if x > F::zero() {
                writeln!(out, "{} {}", x.log10(), p.log10())?;
            }
        }
        Ok(())
    }
}

/// CCDF at every distinct sample value.
pub fn ccdf<F: Scalar>(samples: &SampleSet<F>) -> Result<CcdfTable<F>> {
    if samples.is_empty() {
        return param("cannot build a CCDF from zero samples");
    }
    let sorted = samples.sorted();
    let n = F::from_count(sorted.len());
    let mut points: Vec<(F, F)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if i == 0 || x > sorted[i - 1] {
            points.push((x, F::from_count(sorted.len() - i) / n));
        }
    }
    Ok(CcdfTable { points })
}

/// Result of a tail-index fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit<F> {
    pub x_min: F,
    /// Index of the CCDF, `P(X ≥ x) ~ x^{-alpha_ccdf}`.
    pub alpha_ccdf: F,
    /// Samples `≥ x_min`.
    pub n_tail: usize,
    pub stderr: F,
}

impl<F: Scalar> TailFit<F> {
    /// Exponent of the density (histogram), one more than the CCDF index.
    pub fn histogram_exponent(&self) -> F {
        self.alpha_ccdf + F::one()
    }

    pub fn write_kv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{{")?;
        writeln!(out, "  \"x_min\": {},", self.x_min)?;
        writeln!(out, "  \"alpha_ccdf\": {},", self.alpha_ccdf)?;
        writeln!(out, "  \"histogram_exponent\": {},", self.histogram_exponent())?;
        writeln!(out, "  \"n_tail\": {},", self.n_tail)?;
        writeln!(out, "  \"stderr\": {}", self.stderr)?;
        writeln!(out, "}}")?;
        Ok(())
    }
}

/// Maximum-likelihood CCDF index `n_tail / Σ ln(x_i / x_min)`.
///
/// Samples equal to `x_min` count towards `n_tail` and contribute zero to the
/// log-sum.
pub fn fit_tail_mle<F: Scalar>(samples: &SampleSet<F>, x_min: F) -> Result<TailFit<F>> {
    if !(x_min > F::zero()) {
        return param(format!("x_min must be positive, got {x_min}"));
    }
    let mut n_tail = 0usize;
    let mut n_above = 0usize;
    let mut log_sum = F::zero();
    for &x in &samples.values {
        if x >= x_min {
            n_tail += 1;
            if x > x_min {
                n_above += 1;
                log_sum = log_sum + (x / x_min).ln();
            }
        }
    }
    if n_tail > 0 && n_above == 0 {
        return Err(Error::DegenerateFit { n_tail });
    }
    if n_above < 2 {
        return param(format!("need at least 2 samples above x_min={x_min}, found {n_above}"));
    }
    let alpha = F::from_count(n_tail) / log_sum;
    Ok(TailFit { x_min, alpha_ccdf: alpha, n_tail, stderr: alpha / F::from_count(n_tail).sqrt() })
}

/// Threshold keeping the top `fraction` of samples: the `k`-th largest value,
/// `k = max(2, ⌈fraction·n⌉)`. Falls back to the smallest positive sample
/// when that order statistic is not positive (integer data with many zeros).
pub fn xmin_for_top_fraction<F: Scalar>(samples: &SampleSet<F>, fraction: F) -> Result<F> {
    if !(fraction > F::zero() && fraction <= F::one()) {
        return param(format!("top fraction must be in (0, 1], got {fraction}"));
    }
    let n = samples.len();
    if n < 2 {
        return param("need at least 2 samples to choose x_min");
    }
    let mut sorted = samples.sorted();
    sorted.reverse();
    let k = (fraction * F::from_count(n)).ceil().to_usize().unwrap_or(n).clamp(2, n);
    let x = sorted[k - 1];
    if x > F::zero() {
        return Ok(x);
    }
    sorted.iter().rev().copied().find(|&v| v > F::zero()).map_or_else(|| param("no positive samples"), Ok)
}

/// Quantile band `[lo, hi]`, both in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileBand<F> {
    pub lo: F,
    pub hi: F,
}

impl<F: Scalar> Default for QuantileBand<F> {
    fn default() -> Self {
        Self { lo: F::lit(0.99), hi: F::lit(0.9999) }
    }
}

/// Grid points used by [`log_ccdf_offset`].
pub const OFFSET_GRID_POINTS: usize = 64;

/// Mean of `log10 p_a(x) − log10 p_b(x)` over a log-spaced `x` grid.
///
/// The grid spans the `band` quantiles of the heavier table (the one with
/// the larger upper quantile), clipped to the range where both tables have
/// support so that neither CCDF is evaluated past its last sample.
pub fn log_ccdf_offset<F: Scalar>(a: &CcdfTable<F>, b: &CcdfTable<F>, band: QuantileBand<F>) -> Result<F> {
    if !(band.lo > F::zero() && band.lo <= band.hi && band.hi < F::one()) {
        return param(format!("invalid quantile band [{}, {}]", band.lo, band.hi));
    }
    let heavy = if a.upper_quantile(band.hi) >= b.upper_quantile(band.hi) { a } else { b };
    let lo = heavy.upper_quantile(band.lo).max(a.min_x()).max(b.min_x());
    let hi = heavy.upper_quantile(band.hi).min(a.max_x()).min(b.max_x());
    if !(lo <= hi) {
        return param(format!("tables have no shared support in the band ({lo} > {hi})"));
    }
    if !(lo > F::zero()) {
        return param("band must lie at positive x for log spacing");
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let m = if lo == hi { 1 } else { OFFSET_GRID_POINTS };
    let mut acc = F::zero();
    for i in 0..m {
        let x = if m == 1 {
            lo
        } else {
            (llo + (lhi - llo) * F::from_count(i) / F::from_count(m - 1)).exp().min(hi).max(lo)
        };
        acc = acc + a.p_at(x).log10() - b.p_at(x).log10();
    }
    Ok(acc / F::from_count(m))
}

/// Least-squares line through log-log CCDF points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit<F> {
    pub slope: F,
    pub intercept: F,
    pub r_squared: F,
    pub points: usize,
}

/// Fits `log10 p` against `log10 x` over the top decade of the tail: `x` in
/// `[x_hi/10, x_hi]`, where `x_hi` is the largest tabulated `x` whose CCDF is
/// still at least `min_p`. Requiring `min_p` (say 100 samples' worth) keeps
/// the noisiest extreme points out of the fit.
pub fn top_decade_fit<F: Scalar>(table: &CcdfTable<F>, min_p: F) -> Result<LogLogFit<F>> {
    let idx = table.points.partition_point(|&(_, p)| p >= min_p);
    if idx == 0 {
        return param("no CCDF point reaches the requested minimum probability");
    }
    let x_hi = table.points[idx - 1].0;
    let x_lo = x_hi / F::lit(10.0);
    let pts: Vec<(F, F)> = table.points[..idx]
        .iter()
        .filter(|&&(x, _)| x >= x_lo && x > F::zero())
        .map(|&(x, p)| (x.log10(), p.log10()))
        .collect();
    if pts.len() < 3 {
        return param(format!("top decade holds only {} points", pts.len()));
    }
    let n = F::from_count(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<F>() / n;
    let my = pts.iter().map(|p| p.1).sum::<F>() / n;
    let sxx: F = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: F = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: F = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx == F::zero() {
        return param("top decade has no spread in x");
    }
    let slope = sxy / sxx;
    let r_squared = if syy == F::zero() { F::one() } else { sxy * sxy / (sxx * syy) };
    Ok(LogLogFit { slope, intercept: my - slope * mx, r_squared, points: pts.len() })
}
