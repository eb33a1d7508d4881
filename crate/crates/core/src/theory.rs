//! Asymptotic predictions for the model `R = (c/d) Σ R_j + (1−c)`.
//!
//! If `P(N(T) > x) ~ x^{-α} L(x)` then
//! `P(R > x) ~ c^α / (d^α − c^α d) · x^{-α} L(x)`: the two tails share the
//! index and differ by the factor `y(c)` computed by [`factor`].
//!
//! The Laplace–Stieltjes transform `r(s) = E e^{-sR}` satisfies
//! `r(s) = f(1 − r((c/d) s)) e^{-s(1−c)}`, with `f` the transform of `T`.
//! [`solve_lst`] solves it on a log-spaced grid; the moments of `R` read off
//! the solution near `s = 0` serve as an independent check on the Monte-Carlo
//! sampler.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::fixedpoint::ModelParams;
use crate::scalar::Scalar;

/// `y(c) = c^α / (d^α − c^α d)` for one parameter triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPrediction<F> {
    pub c: F,
    pub d: F,
    pub alpha: F,
    pub y: F,
}

impl<F: Scalar> FactorPrediction<F> {
    pub fn log10_y(&self) -> F {
        self.y.log10()
    }
}

/// Evaluates the tail factor.
pub fn factor<F: Scalar>(c: F, d: F, alpha: F) -> Result<FactorPrediction<F>> {
    ModelParams::new(c, d, alpha)?;
    let num = c.powf(alpha);
    let den = d.powf(alpha) - num * d;
    if !(den > F::zero()) {
        return param(format!("d^alpha - c^alpha d = {den} is not positive (c={c}, d={d}, alpha={alpha})"));
    }
    Ok(FactorPrediction { c, d, alpha, y: num / den })
}

/// Asymptotic ratio `P(R > x) / P(N(T) > x)` as `x → ∞`; the same number as
/// [`factor`], named for comparison workflows.
pub fn predicted_ccdf_ratio<F: Scalar>(params: &ModelParams<F>) -> Result<F> {
    factor(params.c, params.d, params.alpha).map(|p| p.y)
}

/// CSV `c,y,log10_y` over a grid of damping factors.
pub fn write_factor_table<F: Scalar, W: Write>(cs: &[F], d: F, alpha: F, mut out: W) -> Result<()> {
    writeln!(out, "c,y,log10_y")?;
    for &c in cs {
        let p = factor(c, d, alpha)?;
        writeln!(out, "{},{},{}", c, p.y, p.log10_y())?;
    }
    Ok(())
}

/// Laplace–Stieltjes transform `f(s) = E e^{-sT}` of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LstOracle<F> {
    /// Exponential with the given mean: `f(s) = 1 / (1 + mean·s)`.
    Exponential { mean: F },
    /// Pareto(α, scale); no elementary form, evaluated by quadrature.
    Pareto { alpha: F, scale: F },
}

impl<F: Scalar> LstOracle<F> {
    pub fn mean(&self) -> F {
        match *self {
            LstOracle::Exponential { mean } => mean,
            LstOracle::Pareto { alpha, scale } => scale * alpha / (alpha - F::one()),
        }
    }

    pub fn eval(&self, s: F) -> F {
        match *self {
            LstOracle::Exponential { mean } => F::one() / (F::one() + mean * s),
            LstOracle::Pareto { alpha, scale } => pareto_lst(alpha, scale, s),
        }
    }
}

/// `∫_m^∞ e^{-st} α m^α t^{-α-1} dt`. Substituting `u = (t/m)^{-α}` maps the
/// half line above the scale onto `(0, 1]` with a bounded integrand
/// `exp(−s m u^{−1/α})`, which adaptive Simpson handles well; the only sharp
/// feature is the drop near `u = 0` of width `(s m)^α`.
fn pareto_lst<F: Scalar>(alpha: F, scale: F, s: F) -> F {
    if s <= F::zero() {
        return F::one();
    }
    let sm = s * scale;
    let inv_alpha = F::one() / alpha;
    let g = |u: F| if u <= F::zero() { F::zero() } else { (-sm * u.powf(-inv_alpha)).exp() };
    adaptive_simpson(&g, F::zero(), F::one(), F::lit(1e-15), 60)
}

fn adaptive_simpson<F: Scalar, G: Fn(F) -> F>(g: &G, a: F, b: F, tol: F, max_depth: u32) -> F {
    let half = F::lit(0.5);
    let six = F::lit(6.0);
    let (fa, fb) = (g(a), g(b));
    let m = (a + b) * half;
    let fm = g(m);
    let whole = (b - a) / six * (fa + F::lit(4.0) * fm + fb);

    fn step<F: Scalar, G: Fn(F) -> F>(g: &G, a: F, b: F, fa: F, fm: F, fb: F, whole: F, tol: F, depth: u32) -> F {
        let half = F::lit(0.5);
        let six = F::lit(6.0);
        let four = F::lit(4.0);
        let m = (a + b) * half;
        let lm = (a + m) * half;
        let rm = (m + b) * half;
        let flm = g(lm);
        let frm = g(rm);
        let left = (m - a) / six * (fa + four * flm + fm);
        let right = (b - m) / six * (fm + four * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= F::lit(15.0) * tol {
            return left + right + delta / F::lit(15.0);
        }
        step(g, a, m, fa, flm, fm, left, tol * half, depth - 1)
            + step(g, m, b, fm, frm, fb, right, tol * half, depth - 1)
    }

    step(g, a, b, fa, fm, fb, whole, tol, max_depth)
}

/// Grid layout and stopping rule for [`solve_lst`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LstGridSpec<F> {
    pub points: usize,
    pub s_min: F,
    pub s_max: F,
    /// Sup-norm change between sweeps at which iteration stops.
    pub tol: F,
    pub max_sweeps: usize,
}

impl<F: Scalar> Default for LstGridSpec<F> {
    fn default() -> Self {
        Self { points: 2048, s_min: F::lit(1e-6), s_max: F::lit(1e2), tol: F::lit(1e-12), max_sweeps: 1000 }
    }
}

/// Converged transform of `R` on a log-spaced grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LstGrid<F> {
    pub s_points: Vec<F>,
    pub r_values: Vec<F>,
    pub oracle: LstOracle<F>,
    pub sweeps: usize,
    pub last_change: F,
}

impl<F: Scalar> LstGrid<F> {
    /// `r(s)`: linear in `log s` between grid points, the chord from `(0, 1)`
    /// to the first grid point below the grid, last value beyond it.
    pub fn eval(&self, s: F) -> F {
        interpolate(&self.s_points, &self.r_values, s)
    }

    /// `E R ≈ (1 − r(s₀)) / s₀` at the smallest grid point.
    pub fn mean_estimate(&self) -> F {
        let s0 = self.s_points[0];
        (F::one() - self.r_values[0]) / s0
    }

    /// `E R²` from a least-squares fit of `r(s) = 1 + Σ_{k=1}^{4} b_k s^k`
    /// over the grid points in `(0, s_fit]`; returns `2 b₂`.
    ///
    /// Only grid values enter the fit, and the linear term absorbs the
    /// interpolation bias the sweeps leave in `r`, which is close to linear
    /// in `s` near the origin.
    pub fn second_moment_estimate(&self, s_fit: F) -> Result<F> {
        const TERMS: usize = 4;
        let pts: Vec<(F, F)> = self
            .s_points
            .iter()
            .zip(&self.r_values)
            .filter(|(&s, _)| s <= s_fit)
            .map(|(&s, &r)| (s / s_fit, r - F::one()))
            .collect();
        if pts.len() < 2 * TERMS {
            return param(format!("only {} grid points below s = {s_fit}", pts.len()));
        }
        let mut ata = [[F::zero(); TERMS]; TERMS];
        let mut aty = [F::zero(); TERMS];
        for &(x, y) in &pts {
            let mut row = [F::zero(); TERMS];
            let mut pow = x;
            for slot in row.iter_mut() {
                *slot = pow;
                pow = pow * x;
            }
            for i in 0..TERMS {
                aty[i] = aty[i] + row[i] * y;
                for j in 0..TERMS {
                    ata[i][j] = ata[i][j] + row[i] * row[j];
                }
            }
        }
        let b = solve_small(ata, aty)?;
        Ok(F::lit(2.0) * b[1] / (s_fit * s_fit))
    }
}

/// Gaussian elimination with partial pivoting.
fn solve_small<F: Scalar, const K: usize>(mut a: [[F; K]; K], mut b: [F; K]) -> Result<[F; K]> {
    for col in 0..K {
        let pivot =
            (col..K).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite")).expect("nonempty");
        if a[pivot][col] == F::zero() {
            return Err(Error::Numeric("singular moment fit".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..K {
            let f = a[row][col] / a[col][col];
            for k in col..K {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [F::zero(); K];
    for row in (0..K).rev() {
        let tail: F = (row + 1..K).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

fn interpolate<F: Scalar>(s_points: &[F], values: &[F], s: F) -> F {
    let s0 = s_points[0];
    if s < s0 {
        // Continuous at s0. A fixed `1 − s` leaves a jump of order s0^α for
        // α < 2 that every level of the recursion magnifies.
        return F::one() - s * (F::one() - values[0]) / s0;
    }
    let last = s_points.len() - 1;
    if s >= s_points[last] {
        return values[last];
    }
    let k = s_points.partition_point(|&p| p <= s) - 1;
    let (a, b) = (s_points[k], s_points[k + 1]);
    let w = (s.ln() - a.ln()) / (b.ln() - a.ln());
    values[k] + w * (values[k + 1] - values[k])
}

/// Iterates `r_{k+1}(s) = f(1 − r_k((c/d)s)) e^{−s(1−c)}` from `r_0 = e^{−s}`
/// until the sup-norm change is at most `grid.tol`.
pub fn solve_lst<F: Scalar>(params: &ModelParams<F>, oracle: LstOracle<F>, grid: LstGridSpec<F>) -> Result<LstGrid<F>> {
    if !(params.ratio() < F::one()) {
        return param("c/d must be below 1 for a unique solution");
    }
    if grid.points < 2 || !(grid.s_min > F::zero() && grid.s_min < grid.s_max) {
        return param("LST grid needs at least two points on 0 < s_min < s_max");
    }
    let (lmin, lmax) = (grid.s_min.ln(), grid.s_max.ln());
    let last = F::from_count(grid.points - 1);
    let s_points: Vec<F> = (0..grid.points)
        .map(|k| if k == grid.points - 1 { grid.s_max } else { (lmin + (lmax - lmin) * F::from_count(k) / last).exp() })
        .collect();
    let mut r: Vec<F> = s_points.iter().map(|&s| (-s).exp()).collect();
    let ratio = params.ratio();
    let teleport = F::one() - params.c;
    let mut change = F::infinity();
    for sweep in 1..=grid.max_sweeps {
        let next: Vec<F> = s_points
            .par_iter()
            .map(|&s| oracle.eval(F::one() - interpolate(&s_points, &r, ratio * s)) * (-s * teleport).exp())
            .collect();
        change = r.iter().zip(&next).map(|(a, b)| (*a - *b).abs()).fold(F::zero(), F::max);
        r = next;
        if change <= grid.tol {
            return Ok(LstGrid { s_points, r_values: r, oracle, sweeps: sweep, last_change: change });
        }
    }
    Err(Error::Numeric(format!(
        "LST iteration did not reach {} after {} sweeps (last change {change})",
        grid.tol, grid.max_sweeps
    )))
}
