//! One-dimensional grid discretisation of an obstacle-type quasi-variational
//! inclusion with a p-Laplacian principal part.

mod aux;
mod config;
mod problem;
mod solver;

pub mod presets;

pub use aux::{
    coercivity_constants, cutoff_d, cutoff_growth_constant, cutoff_lower_bound_constants, AuxData, Bracket,
    CompensatorViolation,
};
pub use config::{BoundSpec, FluxSpec, FunctionSpec, GridConfig, ObstacleSpec};
pub use problem::{
    apply_e, gradient_norm, lp_norm, pairing, AffineObstacle, GridProblem, Jump, NodeValues, StepBifunction,
};
pub use solver::{
    check_sandwich, load_profile_solution, load_solution, residual_qvip, solve_auxiliary, solve_plain, Selection,
    SolverConfig, SolverResult,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid auxiliary data: {0}")]
    InvalidAux(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("no convergence after {} sweeps (residual {:.3e})", .0.iterations, .0.residual)]
    NotConverged(Box<SolverResult>),
    #[error("node {node} exceeds the obstacle by {excess:.3e}")]
    Infeasible { node: usize, excess: f64 },
    #[error("selection {value} at node {node} lies outside [{lo}, {hi}]")]
    SelectionOutOfRange { node: usize, value: f64, lo: f64, hi: f64 },
}

/// Bound on the discrete gradient norm of any solution at a parameter in
/// `[sub, super]`, from testing with `sub`.
pub fn solution_gradient_bound(prob: &GridProblem) -> f64 {
    let h = prob.h();
    let y = gradient_norm(&prob.sub, prob.p, h);
    let b: f64 = h
        * (0..prob.n)
            .map(|i| prob.growth[i] * (prob.sub[i].abs() + prob.sub[i].abs().max(prob.sup[i].abs())))
            .sum::<f64>();
    (2.0 * y).max((2.0 * b / prob.flux_weight).powf(1.0 / prob.p))
}
