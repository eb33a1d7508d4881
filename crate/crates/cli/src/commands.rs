use std::fs::File;
use std::io::{BufReader, Write};

use prtail::{
    ccdf, degree_histograms, factor as tail_factor, fit_tail_mle, generate, log_ccdf_offset, pagerank as run_pagerank,
    pareto_scale_for_mean, parse_edge_list, sample_in_degree, solve_lst, solve_r, write_factor_table,
    xmin_for_top_fraction, CcdfTable, Dangling, Duplicates, GrowthParams, InDegreeModel, LstGridSpec, LstOracle,
    ModelParams, PageRankConfig, QuantileBand, Samples, SlowlyVarying, SolveConfig, TailFit,
};
use serde_json::{json, Value};

use crate::output::{parameter, tag, CliError, CliResult, OutDir};
use crate::{
    CompareArgs, DanglingArg, FactorArgs, GrowArgs, IntervalArg, LstArgs, ModelArgs, ModelShared, PagerankArgs,
    TailFamily,
};

fn check_fraction(f: f64) -> CliResult<()> {
    if f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(parameter(format!("--xmin-fraction must lie in (0, 1], got {f}")))
    }
}

fn fit_top(samples: &Samples, fraction: f64) -> prtail::Result<TailFit> {
    fit_tail_mle(samples, xmin_for_top_fraction(samples, fraction)?)
}

/// Writes CCDF, log-log table and tail fit for `samples` under `stem`.
/// A fit that cannot be made (too few distinct tail values) is reported and
/// left out rather than aborting the run.
fn write_tail(
    out: &mut OutDir,
    stem: &str,
    samples: &Samples,
    fraction: f64,
) -> CliResult<(CcdfTable, Option<TailFit>)> {
    let table = ccdf(samples)?;
    out.write(&format!("{stem}_ccdf.csv"), |w| table.write_csv(w))?;
    out.write(&format!("{stem}_loglog.dat"), |w| table.write_loglog(w))?;
    let fit = match fit_top(samples, fraction) {
        Ok(fit) => {
            out.write(&format!("{stem}_fit.json"), |w| fit.write_kv(w))?;
            Some(fit)
        }
        Err(e) => {
            eprintln!("warning: no tail fit for {stem}: {e}");
            None
        }
    };
    Ok((table, fit))
}

fn fit_json(fit: Option<TailFit>) -> Value {
    fit.map_or(
        Value::Null,
        |f| json!({ "x_min": f.x_min, "alpha_ccdf": f.alpha_ccdf, "n_tail": f.n_tail, "stderr": f.stderr }),
    )
}

pub fn pagerank(a: &PagerankArgs) -> CliResult<()> {
    check_fraction(a.xmin_fraction)?;
    if a.c.is_empty() {
        return Err(parameter("at least one damping factor is required"));
    }
    let duplicates = if a.keep_duplicates { Duplicates::Keep } else { Duplicates::Dedup };
    let file =
        File::open(&a.graph).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", a.graph.display())))?;
    let parsed = parse_edge_list(BufReader::new(file), duplicates)?;
    let g = &parsed.graph;
    let mut out = OutDir::create(&a.out)?;

    let (in_deg, _) = degree_histograms::<f64>(g);
    let (_, in_fit) = write_tail(&mut out, "in_degree", &in_deg, a.xmin_fraction)?;

    let dangling = match a.dangling {
        DanglingArg::Redistribute => Dangling::Redistribute,
        DanglingArg::Drop => Dangling::Drop,
    };
    let mut runs = Vec::new();
    let mut stalled = Vec::new();
    for &c in &a.c {
        let config = PageRankConfig { c, tol: a.tol, max_iter: a.max_iter, dangling };
        let pr = run_pagerank(g, &config)?;
        let stem = format!("pagerank_c{}", tag(c));
        out.write(&format!("{stem}.txt"), |w| pr.write_text(&parsed.ids, w))?;
        let (_, fit) = write_tail(&mut out, &stem, &pr.to_samples(), a.xmin_fraction)?;
        if !pr.converged {
            stalled.push(c);
        }
        runs.push(json!({
            "c": c,
            "iterations": pr.iterations,
            "residual": pr.residual,
            "converged": pr.converged,
            "mean": pr.mean(),
            "fit": fit_json(fit),
        }));
    }
    let results = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "mean_out_degree": g.edge_count() as f64 / g.node_count() as f64,
        "in_degree_fit": fit_json(in_fit),
        "pagerank": runs,
    });
    out.finish("pagerank", a, &results)?;
    if stalled.is_empty() {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!("power iteration hit --max-iter for c = {stalled:?}")))
    }
}

fn in_degree_model(s: &ModelShared) -> prtail::Result<InDegreeModel> {
    let sv = match s.slowly_varying {
        TailFamily::Constant => SlowlyVarying::Constant,
        TailFamily::Logarithmic => SlowlyVarying::Logarithmic,
    };
    InDegreeModel::calibrated(s.alpha, s.d, sv)
}

fn solve_config(s: &ModelShared) -> SolveConfig {
    SolveConfig { pool_size: s.pool, generations: s.generations, ks_threshold: s.ks_threshold }
}

fn observed_offset(r: &CcdfTable, n: &CcdfTable) -> Option<f64> {
    match log_ccdf_offset(r, n, QuantileBand::default()) {
        Ok(v) => Some(v),
        Err(e) => {
            eprintln!("warning: no observed offset: {e}");
            None
        }
    }
}

pub fn model(a: &ModelArgs) -> CliResult<()> {
    let s = &a.shared;
    check_fraction(s.xmin_fraction)?;
    let params = ModelParams::new(a.c, s.d, s.alpha)?;
    let in_model = in_degree_model(s)?;
    let predicted = tail_factor(a.c, s.d, s.alpha)?;
    let sol = solve_r(&params, &in_model, solve_config(s), s.seed)?;
    let n = sample_in_degree(&in_model, s.samples.unwrap_or(s.pool), s.seed)?;

    let mut out = OutDir::create(&s.out)?;
    out.write("in_degree_samples.txt", |w| n.write_text(w))?;
    out.write("r_samples.txt", |w| sol.samples.write_text(w))?;
    out.write("diagnostics.csv", |w| sol.write_diagnostics_csv(w))?;
    let (n_table, n_fit) = write_tail(&mut out, "in_degree", &n, s.xmin_fraction)?;
    let (r_table, r_fit) = write_tail(&mut out, "r", &sol.samples, s.xmin_fraction)?;
    let offset = observed_offset(&r_table, &n_table);
    if !sol.converged {
        eprintln!("warning: KS distance {} between the last two generations exceeds {}", sol.ks_final, s.ks_threshold);
    }
    let results = json!({
        "observed_log10_offset": offset,
        "predicted_log10_y": predicted.log10_y(),
        "predicted_y": predicted.y,
        "mean_r": sol.samples.mean(),
        "min_r": sol.samples.min(),
        "mean_in_degree": n.mean(),
        "ks_final": sol.ks_final,
        "converged": sol.converged,
        "r_fit": fit_json(r_fit),
        "in_degree_fit": fit_json(n_fit),
    });
    out.write_json("summary.json", &results)?;
    out.finish("model", a, &results)
}

pub fn compare(a: &CompareArgs) -> CliResult<()> {
    let s = &a.shared;
    if a.c.is_empty() {
        return Err(parameter("the c grid is empty"));
    }
    let params: Vec<ModelParams> =
        a.c.iter().map(|&c| ModelParams::new(c, s.d, s.alpha)).collect::<prtail::Result<_>>()?;
    let in_model = in_degree_model(s)?;
    let n = sample_in_degree(&in_model, s.samples.unwrap_or(s.pool), s.seed)?;
    let n_table = ccdf(&n)?;

    let mut rows = Vec::new();
    for p in &params {
        let predicted = tail_factor(p.c, p.d, p.alpha)?.log10_y();
        let sol = solve_r(p, &in_model, solve_config(s), s.seed)?;
        let observed = observed_offset(&ccdf(&sol.samples)?, &n_table);
        rows.push((p.c, predicted, observed, sol.samples.mean(), sol.ks_final));
    }
    let mut out = OutDir::create(&s.out)?;
    out.write("compare.csv", |w| {
        writeln!(w, "c,predicted_log10_y,observed_log10_offset,mean_r,ks_final")?;
        for (c, pred, obs, mean, ks) in &rows {
            let obs = obs.map_or_else(|| "nan".to_string(), |v| v.to_string());
            writeln!(w, "{c},{pred},{obs},{mean},{ks}")?;
        }
        Ok(())
    })?;
    let results: Vec<Value> = rows
        .iter()
        .map(|(c, pred, obs, mean, ks)| {
            json!({ "c": c, "predicted_log10_y": pred, "observed_log10_offset": obs, "mean_r": mean, "ks_final": ks })
        })
        .collect();
    out.finish("compare", a, &results)
}

pub fn generate_gn(a: &GrowArgs) -> CliResult<()> {
    check_fraction(a.xmin_fraction)?;
    let params = GrowthParams { beta: a.beta, d: a.d, n_final: a.n, seed: a.seed };
    let g = generate(&params)?;
    let mut out = OutDir::create(&a.out)?;
    out.write("edges.txt", |w| g.write_edge_list(w))?;
    let (in_deg, _) = degree_histograms::<f64>(&g);
    let (_, fit) = write_tail(&mut out, "in_degree", &in_deg, a.xmin_fraction)?;
    let results = json!({ "nodes": g.node_count(), "edges": g.edge_count(), "in_degree_fit": fit_json(fit) });
    out.finish("generate-gn", a, &results)
}

pub fn factor(a: &FactorArgs) -> CliResult<()> {
    let cs: Vec<f64> = if a.c.is_empty() { (1..100).map(|k| k as f64 / 100.0).collect() } else { a.c.clone() };
    let mut out = OutDir::create(&a.out)?;
    out.write("factor.csv", |w| write_factor_table(&cs, a.d, a.alpha, w))?;
    out.finish("factor", a, &json!({ "points": cs.len() }))
}

pub fn lst(a: &LstArgs) -> CliResult<()> {
    let params = ModelParams::new(a.c, a.d, a.alpha)?;
    let oracle = match a.interval {
        IntervalArg::Exponential => LstOracle::Exponential { mean: a.d },
        IntervalArg::Pareto => LstOracle::Pareto { alpha: a.alpha, scale: pareto_scale_for_mean(a.alpha, a.d)? },
    };
    let spec = LstGridSpec { points: a.points, s_min: a.s_min, s_max: a.s_max, tol: a.tol, max_sweeps: a.max_sweeps };
    let grid = solve_lst(&params, oracle, spec)?;
    let mut out = OutDir::create(&a.out)?;
    out.write("lst.csv", |w| {
        writeln!(w, "s,r")?;
        for (s, r) in grid.s_points.iter().zip(&grid.r_values) {
            writeln!(w, "{s},{r}")?;
        }
        Ok(())
    })?;
    // E R² is finite only with a finite second moment of T
    let finite_second = matches!(a.interval, IntervalArg::Exponential) || a.alpha > 2.0;
    let second = if finite_second { grid.second_moment_estimate(0.1).ok() } else { None };
    let results = json!({
        "sweeps": grid.sweeps,
        "last_change": grid.last_change,
        "mean_estimate": grid.mean_estimate(),
        "second_moment_estimate": second,
    });
    out.finish("lst", a, &results)
}
