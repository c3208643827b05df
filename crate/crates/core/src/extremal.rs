//! Greatest and smallest solutions of the grid problem between a sub- and a
//! supersolution, by monotone iteration of truncated solves.

use serde::Serialize;
use thiserror::Error;

use crate::grid::{apply_e, residual_qvip, solve_auxiliary, AuxData, GridError, GridProblem, Selection, SolverConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("not a subsolution at node {node}: {detail}")]
    NotSubsolution { node: usize, detail: String },
    #[error("not a supersolution at node {node}: {detail}")]
    NotSupersolution { node: usize, detail: String },
    #[error("iterate {step} moved the wrong way at node {node} by {by:.3e}")]
    NotMonotone { step: usize, node: usize, by: f64 },
    #[error("outer iteration stalled after {0} steps")]
    NotConverged(usize),
}

/// Functional used to certify a sub- or supersolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// Indicator of the admissible set.
    Admissible,
    /// Indicator of the lower cone of the candidate itself.
    LowerCone,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certified {
    pub eta: Vec<f64>,
    pub functional: Certificate,
}

fn lower_selection(prob: &GridProblem, u: &[f64], v: &[f64]) -> Vec<f64> {
    (0..prob.n).map(|i| prob.interval(i, u[i], v[i]).0).collect()
}

fn upper_selection(prob: &GridProblem, u: &[f64], v: &[f64]) -> Vec<f64> {
    (0..prob.n).map(|i| prob.interval(i, u[i], v[i]).1).collect()
}

/// Searches `{admissible indicator, lower cone of u}` for a functional
/// certifying `u` as a subsolution at parameter `v`, with the smallest
/// selection of `f`.
pub fn verify_subsolution(prob: &GridProblem, u: &[f64], v: &[f64], tol: f64) -> Result<Certified, ExtremalError> {
    let psi = prob.psi(v);
    let eta = lower_selection(prob, u, v);
    let r = apply_e(u, prob)?;
    let h = prob.h();
    // both candidates need u below the obstacle; the tests then move each
    // node downward, which requires a nonpositive residual
    for functional in [Certificate::Admissible, Certificate::LowerCone] {
        let bad = (0..prob.n).find(|&i| u[i] > psi[i] + tol);
        if let Some(i) = bad {
            if functional == Certificate::LowerCone {
                return Err(ExtremalError::NotSubsolution {
                    node: i,
                    detail: format!("{} lies above the obstacle {}", u[i], psi[i]),
                });
            }
            continue;
        }
        if let Some(i) = (0..prob.n).find(|&i| h * (r[i] + eta[i]) > tol) {
            if functional == Certificate::LowerCone {
                return Err(ExtremalError::NotSubsolution {
                    node: i,
                    detail: format!("residual {:.3e} is positive", r[i] + eta[i]),
                });
            }
            continue;
        }
        return Ok(Certified { eta, functional });
    }
    unreachable!("loop returns on its last candidate")
}

/// Searches `{zero, admissible indicator}` for a functional certifying `u`
/// as a supersolution at parameter `v`, with the largest selection of `f`.
pub fn verify_supersolution(prob: &GridProblem, u: &[f64], v: &[f64], tol: f64) -> Result<Certified, ExtremalError> {
    let psi = prob.psi(v);
    let eta = upper_selection(prob, u, v);
    let r = apply_e(u, prob)?;
    let h = prob.h();
    let upward = |i: usize| u[i] + tol < psi[i];
    // with the zero functional every node below the obstacle may move up;
    // the admissible indicator allows the same tests, so zero is enough
    match (0..prob.n).find(|&i| upward(i) && h * (r[i] + eta[i]) < -tol) {
        None => Ok(Certified { eta, functional: Certificate::Zero }),
        Some(i) => Err(ExtremalError::NotSupersolution {
            node: i,
            detail: format!("residual {:.3e} is negative", r[i] + eta[i]),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalConfig {
    pub solver: SolverConfig,
    pub max_outer: usize,
    /// Stop once an outer step moves no node by more than this.
    pub outer_tol: f64,
    /// Slack for sub/supersolution and monotonicity checks.
    pub check_tol: f64,
}

impl Default for ExtremalConfig {
    fn default() -> Self {
        ExtremalConfig { solver: SolverConfig::default(), max_outer: 1000, outer_tol: 1e-10, check_tol: 1e-8 }
    }
}

impl ExtremalConfig {
    pub fn with_tol(tol: f64) -> Self {
        ExtremalConfig { solver: SolverConfig::with_tol(tol), outer_tol: tol, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OuterStep {
    pub step: usize,
    pub max_update: f64,
    pub inner_iterations: usize,
    pub inner_residual: f64,
    pub sandwich_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub u: Vec<f64>,
    pub eta: Vec<f64>,
    /// Residual of `u` as a solution at parameter `u`.
    pub residual: f64,
    pub steps: Vec<OuterStep>,
}

impl ExtremalResult {
    pub fn outer_iterations(&self) -> usize {
        self.steps.len()
    }
}

fn drive(prob: &GridProblem, cfg: &ExtremalConfig, descending: bool) -> Result<ExtremalResult, ExtremalError> {
    let tol = cfg.check_tol;
    verify_subsolution(prob, &prob.sub, &prob.sub, tol)?;
    verify_supersolution(prob, &prob.sup, &prob.sup, tol)?;
    let mut v = if descending { prob.sup.clone() } else { prob.sub.clone() };
    let mut steps = Vec::new();
    for step in 0..cfg.max_outer {
        let aux = if descending {
            let low = verify_subsolution(prob, &prob.sub, &v, tol)?;
            let high = verify_supersolution(prob, &v, &v, tol)?;
            AuxData::single(prob.sub.clone(), low.eta, v.clone(), high.eta)?
        } else {
            let low = verify_subsolution(prob, &v, &v, tol)?;
            let high = verify_supersolution(prob, &prob.sup, &v, tol)?;
            AuxData::single(v.clone(), low.eta, prob.sup.clone(), high.eta)?
        };
        let solver = SolverConfig {
            selection: if descending { Selection::Greatest } else { Selection::Smallest },
            ..cfg.solver
        };
        let res = solve_auxiliary(prob, &v, &aux, Some(&v), &solver)?;
        let mut max_update = 0.0f64;
        for i in 0..prob.n {
            let moved = res.u[i] - v[i];
            let wrong = if descending { moved } else { -moved };
            if wrong > tol {
                return Err(ExtremalError::NotMonotone { step, node: i, by: wrong });
            }
            max_update = max_update.max(moved.abs());
        }
        steps.push(OuterStep {
            step,
            max_update,
            inner_iterations: res.iterations,
            inner_residual: res.residual,
            sandwich_ok: res.sandwich_ok,
        });
        v = res.u;
        if max_update < cfg.outer_tol {
            let (residual, eta) = fixed_point_residual(prob, &v, cfg.solver.contact_tol)?;
            return Ok(ExtremalResult { u: v, eta, residual, steps });
        }
    }
    Err(ExtremalError::NotConverged(cfg.max_outer))
}

/// Descends from the supersolution.
pub fn greatest_solution(prob: &GridProblem, cfg: &ExtremalConfig) -> Result<ExtremalResult, ExtremalError> {
    drive(prob, cfg, true)
}

/// Ascends from the subsolution.
pub fn smallest_solution(prob: &GridProblem, cfg: &ExtremalConfig) -> Result<ExtremalResult, ExtremalError> {
    drive(prob, cfg, false)
}

/// Residual of `u` as a solution at parameter `u`, with the best selection
/// per node among the interval ends and the clamped balancing value.
pub fn fixed_point_residual(prob: &GridProblem, u: &[f64], contact_tol: f64) -> Result<(f64, Vec<f64>), GridError> {
    solution_residual(prob, u, u, contact_tol)
}

/// Residual of `u` at parameter `v` with the best per-node selection.
pub fn solution_residual(
    prob: &GridProblem,
    u: &[f64],
    v: &[f64],
    contact_tol: f64,
) -> Result<(f64, Vec<f64>), GridError> {
    let r = apply_e(u, prob)?;
    let psi = prob.psi(v);
    let eta: Vec<f64> = (0..prob.n)
        .map(|i| {
            let (lo, hi) = prob.f.interval_hull(i, u[i], v[i], 1e-9);
            let contact = u[i] + contact_tol > psi[i];
            let score = |e: f64| if contact { (r[i] + e).max(0.0) } else { (r[i] + e).abs() };
            [lo, hi, (-r[i]).clamp(lo, hi)]
                .into_iter()
                .min_by(|a, b| score(*a).total_cmp(&score(*b)))
                .expect("three candidates")
        })
        .collect();
    Ok((residual_qvip(prob, u, &eta, v, contact_tol)?, eta))
}

/// All vectors with entries in `levels` between sub and super that solve
/// the problem at parameter `v` (or at themselves when `v` is `None`).
pub fn brute_force_solutions(
    prob: &GridProblem,
    levels: &[f64],
    v: Option<&[f64]>,
    tol: f64,
) -> Result<Vec<Vec<f64>>, GridError> {
    if prob.n > 4 || levels.len() > 6 || levels.is_empty() {
        return Err(GridError::Config(format!(
            "exhaustive search needs n <= 4 and 1..=6 levels, got n = {} and {} levels",
            prob.n,
            levels.len()
        )));
    }
    let n = prob.n;
    let total = levels.len().pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let u: Vec<f64> = (0..n)
            .map(|_| {
                let x = levels[c % levels.len()];
                c /= levels.len();
                x
            })
            .collect();
        if (0..n).any(|i| u[i] < prob.sub[i] || u[i] > prob.sup[i]) {
            continue;
        }
        let param = v.unwrap_or(&u);
        match solution_residual(prob, &u, param, 1e-12) {
            Ok((r, _)) if r <= tol => out.push(u),
            Ok(_) | Err(GridError::Infeasible { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForce {
    pub solutions: Vec<Vec<f64>>,
    /// Componentwise maximum, when it is itself a solution.
    pub greatest: Option<Vec<f64>>,
    pub smallest: Option<Vec<f64>>,
}

/// Exhaustive fixed points on a quantised grid.
pub fn brute_force_extremal(prob: &GridProblem, levels: &[f64], tol: f64) -> Result<BruteForce, GridError> {
    let solutions = brute_force_solutions(prob, levels, None, tol)?;
    let fold = |pick: fn(f64, f64) -> f64| -> Option<Vec<f64>> {
        let first = solutions.first()?.clone();
        let e = solutions.iter().fold(first, |acc, u| acc.iter().zip(u).map(|(a, b)| pick(*a, *b)).collect());
        solutions.contains(&e).then_some(e)
    };
    let greatest = fold(f64::max);
    let smallest = fold(f64::min);
    Ok(BruteForce { solutions, greatest, smallest })
}

/// Solves the truncated problem whose band starts at `u1 ∨ u2`, both taken as
/// subsolutions at `v`. The result lies above both.
pub fn directedness_witness(
    prob: &GridProblem,
    v: &[f64],
    u1: &[f64],
    u2: &[f64],
    cfg: &ExtremalConfig,
) -> Result<Vec<f64>, ExtremalError> {
    let a = verify_subsolution(prob, u1, v, cfg.check_tol)?;
    let b = verify_subsolution(prob, u2, v, cfg.check_tol)?;
    let top = verify_supersolution(prob, &prob.sup, v, cfg.check_tol)?;
    let aux = AuxData::new(
        [u1.to_vec(), u2.to_vec()],
        [a.eta, b.eta],
        [prob.sup.clone(), prob.sup.clone()],
        [top.eta.clone(), top.eta],
    )?;
    let solver = SolverConfig { selection: Selection::Smallest, ..cfg.solver };
    Ok(solve_auxiliary(prob, v, &aux, None, &solver)?.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::presets::preset;

    fn build(name: &str) -> GridProblem {
        preset(name).unwrap().build().unwrap()
    }

    #[test]
    fn quantized_extremal_solutions() {
        let prob = build("quantized");
        let cfg = ExtremalConfig::default();
        let g = greatest_solution(&prob, &cfg).unwrap();
        for (a, b) in g.u.iter().zip([0.75, 1.0, 0.75]) {
            assert!((a - b).abs() < 1e-9, "{:?}", g.u);
        }
        let s = smallest_solution(&prob, &cfg).unwrap();
        assert!(s.u.iter().all(|x| x.abs() < 1e-9));
        let levels = preset("quantized").unwrap().levels.unwrap();
        let bf = brute_force_extremal(&prob, &levels, 1e-9).unwrap();
        assert_eq!(bf.greatest, Some(vec![0.75, 1.0, 0.75]));
        assert_eq!(bf.smallest, Some(vec![0.0; 3]));
    }

    #[test]
    fn certificates() {
        let prob = build("plain-obstacle");
        let zero = vec![0.0; prob.n];
        assert_eq!(verify_subsolution(&prob, &zero, &zero, 1e-12).unwrap().functional, Certificate::Admissible);
        assert_eq!(verify_supersolution(&prob, &prob.sup, &zero, 1e-12).unwrap().functional, Certificate::Zero);
        // 0.2 is above the obstacle
        assert!(matches!(
            verify_subsolution(&prob, &vec![0.2; prob.n], &zero, 1e-12),
            Err(ExtremalError::NotSubsolution { .. })
        ));
        // zero is not a supersolution under a downward load
        assert!(matches!(
            verify_supersolution(&prob, &zero, &zero, 1e-12),
            Err(ExtremalError::NotSupersolution { .. })
        ));
    }

    #[test]
    fn independent_data_settles_after_one_step() {
        let prob = build("plain-obstacle");
        let g = greatest_solution(&prob, &ExtremalConfig::default()).unwrap();
        assert_eq!(g.steps.len(), 2);
        assert!(g.steps[1].max_update < 1e-10);
        assert!(g.residual < 1e-8);
    }

    #[test]
    fn brute_force_limits() {
        let prob = build("plain-obstacle");
        assert!(brute_force_extremal(&prob, &[0.0, 0.1], 1e-9).is_err());
    }
}
