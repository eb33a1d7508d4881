use approx::assert_relative_eq;
use proptest::prelude::*;
use prtail::{factor, pareto_scale_for_mean, solve_lst, LstGridSpec, LstOracle, ModelParams};
use statrs::function::gamma::{gamma, gamma_ur};

/// Second moment of R for T ~ Exp(mean d): matching the s² coefficients of
/// r(s) = f(1 − r((c/d)s)) e^{−s(1−c)} with E R = 1, E T = d, E T² = 2d²
/// gives η₂ (1 − c²/d) = 2c² + 2c(1 − c) + (1 − c)² = 1 + c².
fn eta2_exponential(c: f64, d: f64) -> f64 {
    (1.0 + c * c) / (1.0 - c * c / d)
}

/// Γ(−α, x) from Γ(−α + k, x) by the downward recurrence
/// Γ(a, x) = (Γ(a + 1, x) − x^a e^{−x}) / a.
fn upper_gamma_negative(alpha: f64, x: f64) -> f64 {
    let k = alpha.ceil();
    let mut a = -alpha + k;
    let mut value = gamma_ur(a, x) * gamma(a);
    while a > -alpha + 0.5 {
        a -= 1.0;
        value = (value - x.powf(a) * (-x).exp()) / a;
    }
    value
}

/// E e^{−sT} for Pareto(α, m) = α (sm)^α Γ(−α, sm).
fn pareto_lst_closed_form(alpha: f64, m: f64, s: f64) -> f64 {
    let x = s * m;
    alpha * x.powf(alpha) * upper_gamma_negative(alpha, x)
}

#[test]
fn second_moment_matches_symbolic_value() {
    for c in [0.1, 0.5, 0.85, 0.95] {
        for d in [8.0, 8.2] {
            let p = ModelParams::new(c, d, 1.5).unwrap();
            let grid = solve_lst(&p, LstOracle::Exponential { mean: d }, LstGridSpec::default()).unwrap();
            let eta2 = grid.second_moment_estimate(0.1).unwrap();
            assert_relative_eq!(eta2, eta2_exponential(c, d), max_relative = 1e-3);
        }
    }
}

#[test]
fn mean_is_one_for_light_and_moderate_tails() {
    for c in [0.1, 0.5, 0.9] {
        let p = ModelParams::new(c, 8.2, 2.5).unwrap();
        let m = pareto_scale_for_mean(2.5, 8.2).unwrap();
        for oracle in [LstOracle::Exponential { mean: 8.2 }, LstOracle::Pareto { alpha: 2.5, scale: m }] {
            let grid = solve_lst(&p, oracle, LstGridSpec::default()).unwrap();
            assert!((grid.mean_estimate() - 1.0).abs() <= 1e-4, "c={c} {oracle:?}: {}", grid.mean_estimate());
        }
    }
}

#[test]
fn pareto_quadrature_matches_incomplete_gamma() {
    for (alpha, m) in [(1.1, 0.745454545), (1.5, 2.0), (2.5, 4.92)] {
        let oracle = LstOracle::Pareto { alpha, scale: m };
        for s in [1e-3, 1e-2, 0.1, 1.0, 5.0] {
            let exact = pareto_lst_closed_form(alpha, m, s);
            assert_relative_eq!(oracle.eval(s), exact, max_relative = 1e-9);
        }
    }
}

#[test]
fn grid_is_monotone_convex_and_in_unit_interval() {
    let m = pareto_scale_for_mean(1.1, 8.2).unwrap();
    for c in [0.1, 0.5, 0.9] {
        let p = ModelParams::new(c, 8.2, 1.1).unwrap();
        let grid = solve_lst(&p, LstOracle::Pareto { alpha: 1.1, scale: m }, LstGridSpec::default()).unwrap();
        assert!(grid.last_change <= 1e-12);
        let (s, r) = (&grid.s_points, &grid.r_values);
        assert!(r.iter().all(|&v| v > 0.0 && v <= 1.0));
        for k in 0..r.len() - 1 {
            assert!(r[k + 1] <= r[k], "not monotone at s={}", s[k]);
        }
        for k in 1..r.len() - 1 {
            // second divided difference, in value units; 1e-10 is the
            // quadrature noise floor of the Pareto oracle
            let left = (r[k] - r[k - 1]) / (s[k] - s[k - 1]);
            let right = (r[k + 1] - r[k]) / (s[k + 1] - s[k]);
            let curvature = (right - left) * (s[k + 1] - s[k - 1]) / 2.0;
            assert!(curvature >= -1e-10, "not convex at s={}: {curvature}", s[k]);
        }
        let s0 = s[0];
        assert!((grid.eval(s0 * (1.0 - 1e-12)) - r[0]).abs() < 1e-15, "jump at the grid start");
        assert!((grid.eval(1e-12) - 1.0).abs() < 1e-11);
    }
}

#[test]
fn factor_table_reproduces_reference_curve_shape() {
    let ys: Vec<f64> = (1..100).map(|k| factor(k as f64 / 100.0, 8.2, 1.1).unwrap().log10_y()).collect();
    assert!(ys.windows(2).all(|w| w[1] > w[0]));
    assert!((ys[49] - (-1.130)).abs() < 5e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factor_positive_and_increasing_in_c(c1 in 0.001f64..0.998, dc in 1e-4f64..1e-3, d in 1.01f64..50.0, alpha in 1.01f64..4.0) {
        let c2 = (c1 + dc).min(0.999);
        let y1 = factor(c1, d, alpha).unwrap().y;
        let y2 = factor(c2, d, alpha).unwrap().y;
        prop_assert!(y1 > 0.0 && y1.is_finite());
        prop_assert!(y2 >= y1);
    }
}
