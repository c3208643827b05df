use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use subpoint_core::extremal::{
    brute_force_extremal, greatest_solution, smallest_solution, ExtremalConfig, ExtremalError, ExtremalResult,
    OuterStep,
};
use subpoint_core::grid::{GridConfig, GridProblem};

use crate::input::{build, extremal_config, load_config};
use crate::output::{csv_writer, num, prepare, write_summary};
use crate::{SolveArgs, UsageError};

#[derive(Serialize)]
struct DriverSummary {
    converged: bool,
    outer_iterations: usize,
    residual: Option<f64>,
    error: Option<String>,
}

impl DriverSummary {
    fn of(r: &Result<ExtremalResult, ExtremalError>) -> Self {
        match r {
            Ok(r) => DriverSummary {
                converged: true,
                outer_iterations: r.outer_iterations(),
                residual: Some(r.residual),
                error: None,
            },
            Err(e) => {
                DriverSummary { converged: false, outer_iterations: 0, residual: None, error: Some(e.to_string()) }
            }
        }
    }
}

/// Outcome of both drivers on one problem.
struct Pair {
    smallest: Result<ExtremalResult, ExtremalError>,
    greatest: Result<ExtremalResult, ExtremalError>,
}

impl Pair {
    fn solve(prob: &GridProblem, cfg: &ExtremalConfig) -> Self {
        let (smallest, greatest) = rayon::join(|| smallest_solution(prob, cfg), || greatest_solution(prob, cfg));
        Pair { smallest, greatest }
    }

    fn both(&self) -> Option<(&ExtremalResult, &ExtremalResult)> {
        Some((self.smallest.as_ref().ok()?, self.greatest.as_ref().ok()?))
    }

    fn max_gap(&self) -> Option<f64> {
        let (s, g) = self.both()?;
        Some(s.u.iter().zip(&g.u).map(|(a, b)| b - a).fold(f64::NEG_INFINITY, f64::max))
    }

    /// First reason the pair is not an acceptable answer.
    fn defect(&self, prob: &GridProblem, cfg: &ExtremalConfig) -> Option<String> {
        let (s, g) = match (&self.smallest, &self.greatest) {
            (Ok(s), Ok(g)) => (s, g),
            (Err(e), _) => return Some(format!("smallest driver: {e}")),
            (_, Err(e)) => return Some(format!("greatest driver: {e}")),
        };
        let tol = cfg.check_tol;
        let chain = [&prob.sub, &s.u, &g.u, &prob.sup];
        for w in chain.windows(2) {
            if let Some(i) = (0..prob.n).find(|&i| w[0][i] > w[1][i] + tol) {
                return Some(format!("order violated at node {i}: {} > {}", w[0][i], w[1][i]));
            }
        }
        for (label, r) in [("smallest", s), ("greatest", g)] {
            if r.residual > tol {
                return Some(format!("{label} residual {:.3e} exceeds {tol:.1e}", r.residual));
            }
        }
        None
    }
}

fn write_solution(
    dir: &Path,
    name: &str,
    prob: &GridProblem,
    s: &ExtremalResult,
    g: &ExtremalResult,
    contact_tol: f64,
) -> Result<(), UsageError> {
    let (mut w, _) = csv_writer(dir, name)?;
    w.write_record(["node", "x", "u_smallest", "u_greatest", "eta", "active_obstacle_flag"])?;
    let psi = prob.psi(&g.u);
    for i in 0..prob.n {
        let active = g.u[i] + contact_tol > psi[i];
        w.write_record([
            i.to_string(),
            num(prob.x(i)),
            num(s.u[i]),
            num(g.u[i]),
            num(g.eta[i]),
            u8::from(active).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_log(dir: &Path, name: &str, steps: &[OuterStep]) -> Result<(), UsageError> {
    let (mut w, _) = csv_writer(dir, name)?;
    w.write_record(["outer_iter", "max_update", "residual"])?;
    for s in steps {
        w.write_record([s.step.to_string(), num(s.max_update), num(s.inner_residual)])?;
    }
    w.flush()?;
    Ok(())
}

/// Solution table plus one run log per driver.
fn write_pair(
    dir: &Path,
    prefix: &str,
    prob: &GridProblem,
    pair: &Pair,
    cfg: &ExtremalConfig,
) -> Result<(), UsageError> {
    if let Some((s, g)) = pair.both() {
        write_solution(dir, &format!("{prefix}solution.csv"), prob, s, g, cfg.solver.contact_tol)?;
    }
    for (label, r) in [("smallest", &pair.smallest), ("greatest", &pair.greatest)] {
        if let Ok(r) = r {
            write_log(dir, &format!("{prefix}run_log_{label}.csv"), &r.steps)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveSummary {
    command: &'static str,
    name: Option<String>,
    n: usize,
    p: f64,
    all_passed: bool,
    failure: Option<String>,
    max_gap: Option<f64>,
    smallest: DriverSummary,
    greatest: DriverSummary,
}

fn solve_summary(command: &'static str, config: &GridConfig, pair: &Pair, failure: Option<String>) -> SolveSummary {
    SolveSummary {
        command,
        name: config.name.clone(),
        n: config.n,
        p: config.p,
        all_passed: failure.is_none(),
        failure,
        max_gap: pair.max_gap(),
        smallest: DriverSummary::of(&pair.smallest),
        greatest: DriverSummary::of(&pair.greatest),
    }
}

pub fn solve(args: &SolveArgs) -> Result<bool, UsageError> {
    let config = load_config(&args.input)?;
    let prob = build(&config)?;
    let cfg = extremal_config(args)?;
    let out = &args.common.out;
    prepare(out)?;

    let pair = Pair::solve(&prob, &cfg);
    write_pair(out, "", &prob, &pair, &cfg)?;
    let failure = pair.defect(&prob, &cfg);
    write_summary(out, &solve_summary("solve", &config, &pair, failure.clone()))?;

    if let (Ok(s), Ok(g)) = (&pair.smallest, &pair.greatest) {
        println!(
            "smallest: {} outer steps, residual {:.3e}; greatest: {} outer steps, residual {:.3e}",
            s.outer_iterations(),
            s.residual,
            g.outer_iterations(),
            g.residual
        );
    }
    match failure {
        Some(f) => {
            eprintln!("check failed: {f}");
            Ok(false)
        }
        None => {
            println!("wrote {}", out.display());
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    instance: usize,
    n: usize,
    p: f64,
    passed: bool,
    failure: Option<String>,
    max_gap: Option<f64>,
    smallest: DriverSummary,
    greatest: DriverSummary,
}

#[derive(Serialize)]
struct SweepSummary {
    command: &'static str,
    name: Option<String>,
    all_passed: bool,
    instances: Vec<SweepRow>,
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn sweep(args: &SolveArgs, ps: &[f64], ns: &[usize]) -> Result<bool, UsageError> {
    let base = load_config(&args.input)?;
    let cfg = extremal_config(args)?;
    let ps = if ps.is_empty() { vec![base.p] } else { ps.to_vec() };
    let ns = if ns.is_empty() { vec![base.n] } else { ns.to_vec() };

    // build everything first so a bad combination is a config error, not a
    // failed instance
    let mut instances = Vec::new();
    for &p in &ps {
        for &n in &ns {
            let c = GridConfig { p, n, ..base.clone() };
            let prob = build(&c).map_err(|e| UsageError::Config(format!("p = {p}, n = {n}: {e}")))?;
            instances.push((c, prob));
        }
    }
    let out = &args.common.out;
    prepare(out)?;

    let pairs: Vec<Pair> = instances.par_iter().map(|(_, prob)| Pair::solve(prob, &cfg)).collect();

    let (mut w, _) = csv_writer(out, "sweep.csv")?;
    w.write_record([
        "instance",
        "n",
        "p",
        "status",
        "outer_smallest",
        "outer_greatest",
        "residual_smallest",
        "residual_greatest",
        "max_gap",
    ])?;
    let mut rows = Vec::new();
    for (k, ((c, prob), pair)) in instances.iter().zip(&pairs).enumerate() {
        write_pair(out, &format!("instance_{k}_"), prob, pair, &cfg)?;
        let failure = pair.defect(prob, &cfg);
        let (s, g) = (DriverSummary::of(&pair.smallest), DriverSummary::of(&pair.greatest));
        w.write_record([
            k.to_string(),
            c.n.to_string(),
            num(c.p),
            if failure.is_none() { "ok".into() } else { "fail".into() },
            s.outer_iterations.to_string(),
            g.outer_iterations.to_string(),
            opt(s.residual),
            opt(g.residual),
            opt(pair.max_gap()),
        ])?;
        if let Some(f) = &failure {
            eprintln!("instance {k} (p = {}, n = {}): {f}", c.p, c.n);
        }
        rows.push(SweepRow {
            instance: k,
            n: c.n,
            p: c.p,
            passed: failure.is_none(),
            failure,
            max_gap: pair.max_gap(),
            smallest: s,
            greatest: g,
        });
    }
    w.flush()?;

    let all_passed = rows.iter().all(|r| r.passed);
    let passed = rows.iter().filter(|r| r.passed).count();
    println!("{passed}/{} instances passed", rows.len());
    write_summary(out, &SweepSummary { command: "sweep", name: base.name.clone(), all_passed, instances: rows })?;
    Ok(all_passed)
}

#[derive(Serialize)]
struct OracleSummary {
    command: &'static str,
    name: Option<String>,
    levels: Vec<f64>,
    step: f64,
    solutions: usize,
    brute_smallest: Option<Vec<f64>>,
    brute_greatest: Option<Vec<f64>>,
    driver_smallest: Option<Vec<f64>>,
    driver_greatest: Option<Vec<f64>>,
    all_passed: bool,
    failure: Option<String>,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn oracle(args: &SolveArgs) -> Result<bool, UsageError> {
    let config = load_config(&args.input)?;
    let levels = config
        .levels
        .clone()
        .ok_or_else(|| UsageError::Config(format!("{}: field `levels` is required for the oracle", args.input)))?;
    let prob = build(&config)?;
    let cfg = extremal_config(args)?;
    let out = &args.common.out;

    let mut sorted = levels.clone();
    sorted.sort_by(f64::total_cmp);
    let step = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let step = if step.is_finite() { step } else { 0.0 };
    let brute = brute_force_extremal(&prob, &levels, cfg.check_tol).map_err(|e| UsageError::Config(e.to_string()))?;
    prepare(out)?;

    let (mut w, _) = csv_writer(out, "oracle_solutions.csv")?;
    let mut header = vec!["solution".to_string()];
    header.extend((0..prob.n).map(|i| format!("u_{i}")));
    w.write_record(&header)?;
    for (k, u) in brute.solutions.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(u.iter().copied().map(num));
        w.write_record(&row)?;
    }
    w.flush()?;

    let pair = Pair::solve(&prob, &cfg);
    write_pair(out, "", &prob, &pair, &cfg)?;

    let reach = step + 1e-12;
    let failure = pair.defect(&prob, &cfg).or_else(|| {
        let (s, g) = pair.both()?;
        let (bs, bg) = match (&brute.smallest, &brute.greatest) {
            (Some(bs), Some(bg)) => (bs, bg),
            _ => {
                return Some(format!(
                    "{} quantized solutions have no smallest or greatest element",
                    brute.solutions.len()
                ))
            }
        };
        for (label, driver, exact) in [("smallest", &s.u, bs), ("greatest", &g.u, bg)] {
            let d = distance(driver, exact);
            if d > reach {
                return Some(format!("{label} driver is {d:.3e} from the enumerated {label}, step {step}"));
            }
        }
        None
    });

    let summary = OracleSummary {
        command: "oracle",
        name: config.name.clone(),
        levels,
        step,
        solutions: brute.solutions.len(),
        brute_smallest: brute.smallest.clone(),
        brute_greatest: brute.greatest.clone(),
        driver_smallest: pair.smallest.as_ref().ok().map(|r| r.u.clone()),
        driver_greatest: pair.greatest.as_ref().ok().map(|r| r.u.clone()),
        all_passed: failure.is_none(),
        failure: failure.clone(),
    };
    write_summary(out, &summary)?;
    println!("{} quantized solutions", brute.solutions.len());
    match failure {
        Some(f) => {
            eprintln!("check failed: {f}");
            Ok(false)
        }
        None => Ok(true),
    }
}
