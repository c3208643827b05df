//! Workloads shared by the benchmarks.

use subpoint_core::fixpoint::Multifunction;
use subpoint_core::gen::{random_increasing_upward, rng};
use subpoint_core::grid::{BoundSpec, FunctionSpec, GridConfig, GridProblem, NodeValues};
use subpoint_core::order::FiniteLattice;

/// Unit-load p-Laplacian problem without obstacle, bracketed by 0 and the
/// solution for twice the load.
pub fn load_problem(n: usize, p: f64) -> GridProblem {
    GridConfig {
        name: None,
        n,
        p,
        flux: Default::default(),
        f: FunctionSpec { offset: NodeValues::Scalar(-1.0), ..Default::default() },
        obstacle: None,
        sub: BoundSpec::Constant(0.0),
        sup: BoundSpec::Load(2.0),
        levels: None,
    }
    .build()
    .expect("valid load problem")
}

/// Random increasing-upward multifunction on the boolean lattice of rank `k`.
pub fn boolean_multifunction(k: usize, seed: u64) -> (FiniteLattice, Multifunction) {
    let lat = FiniteLattice::boolean(k);
    let s = random_increasing_upward(&mut rng(seed), &lat, 0.0);
    (lat, s)
}
