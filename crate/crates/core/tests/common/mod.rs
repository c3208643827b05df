//! Reference solvers written independently of the library's nodal solver.

#![allow(dead_code)]

use subpoint_core::extremal::{verify_subsolution, verify_supersolution};
use subpoint_core::grid::{AuxData, GridProblem};

/// Thomas algorithm for a tridiagonal system; `lower[0]` and `upper[n-1]`
/// are ignored.
pub fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// `-u'' = load` on a uniform grid of `n` interior nodes, zero boundary.
pub fn poisson(n: usize, load: f64) -> Vec<f64> {
    let h = 1.0 / (n as f64 + 1.0);
    let k = 1.0 / (h * h);
    thomas(&vec![-k; n], &vec![2.0 * k; n], &vec![-k; n], &vec![load; n])
}

/// Projected SOR for `-u'' = load, u <= psi`, run until the largest update
/// drops below `tol`.
pub fn psor_obstacle(n: usize, load: f64, psi: &[f64], omega: f64, tol: f64) -> Vec<f64> {
    let h2 = (1.0 / (n as f64 + 1.0)).powi(2);
    let mut u = vec![0.0; n];
    loop {
        let mut delta = 0.0f64;
        for i in 0..n {
            let left = if i == 0 { 0.0 } else { u[i - 1] };
            let right = if i + 1 == n { 0.0 } else { u[i + 1] };
            let gs = 0.5 * (left + right + h2 * load);
            let next = (u[i] + omega * (gs - u[i])).min(psi[i]);
            delta = delta.max((next - u[i]).abs());
            u[i] = next;
        }
        if delta < tol {
            return u;
        }
    }
}

/// Band `[prob.sub, prob.sup]` at parameter `v`, certified by the bounds.
pub fn bound_band(prob: &GridProblem, v: &[f64]) -> AuxData {
    let low = verify_subsolution(prob, &prob.sub, v, 1e-8).expect("sub certifies");
    let high = verify_supersolution(prob, &prob.sup, v, 1e-8).expect("super certifies");
    AuxData::single(prob.sub.clone(), low.eta, prob.sup.clone(), high.eta).expect("ordered band")
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn leq(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| *x <= y + tol)
}
