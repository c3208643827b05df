mod common;

use common::{bound_band, max_gap, poisson, psor_obstacle, thomas};
use subpoint_core::gen::rng;
use subpoint_core::grid::presets::preset;
use subpoint_core::grid::{
    check_sandwich, residual_qvip, solve_auxiliary, solve_plain, GridConfig, GridError, SolverConfig,
};
use subpoint_core::verify::random_sandwich_instance;

#[test]
fn thomas_solves_a_small_system() {
    // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] has x = [1 1 1]
    let x = thomas(&[0.0, -1.0, -1.0], &[2.0; 3], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 1.0]);
    assert!(max_gap(&x, &[1.0; 3]) < 1e-15);
}

#[test]
fn linear_load_matches_tridiagonal_solve() {
    let prob = preset("linear-load").unwrap().build().unwrap();
    let v = prob.sup.clone();
    let aux = bound_band(&prob, &v);
    let r = solve_auxiliary(&prob, &v, &aux, None, &SolverConfig::default()).unwrap();
    assert!(max_gap(&r.u, &poisson(31, 1.0)) <= 1e-10);
    assert!(r.sandwich_ok);
    assert!(residual_qvip(&prob, &r.u, &r.eta, &v, 1e-9).unwrap() <= 1e-8);
}

#[test]
fn plain_obstacle_matches_projected_sor() {
    let prob = preset("plain-obstacle").unwrap().build().unwrap();
    let v = prob.sup.clone();
    let aux = bound_band(&prob, &v);
    let r = solve_auxiliary(&prob, &v, &aux, None, &SolverConfig::default()).unwrap();
    let oracle = psor_obstacle(31, 8.0, &prob.psi(&v), 1.0, 1e-10);
    assert!(max_gap(&r.u, &oracle) <= 1e-6);
    // without truncation the same solution comes out
    let plain = solve_plain(&prob, &v, None, &SolverConfig::default()).unwrap();
    assert!(max_gap(&plain.u, &oracle) <= 1e-6);
}

#[test]
fn perturbing_an_inactive_node_raises_the_residual() {
    let prob = preset("linear-load").unwrap().build().unwrap();
    let v = prob.sup.clone();
    let mut u = poisson(31, 1.0);
    let eta = vec![-1.0; 31];
    assert!(residual_qvip(&prob, &u, &eta, &v, 1e-9).unwrap() <= 1e-8);
    u[10] += 0.1;
    assert!(residual_qvip(&prob, &u, &eta, &v, 1e-9).unwrap() > 1e-3);
}

#[test]
fn obstacle_violation_is_reported() {
    let prob = preset("plain-obstacle").unwrap().build().unwrap();
    let v = prob.sup.clone();
    let mut u = vec![0.05; 31];
    u[4] = 0.2;
    let err = residual_qvip(&prob, &u, &vec![-8.0; 31], &v, 1e-9).unwrap_err();
    assert!(matches!(err, GridError::Infeasible { node: 4, .. }));
}

#[test]
fn sandwich_bounds() {
    let prob = preset("plain-obstacle").unwrap().build().unwrap();
    let aux = bound_band(&prob, &prob.sup);
    assert!(check_sandwich(&prob.sub, &aux, 0.0));
    let mut above = prob.sup.clone();
    above[3] += 1.0;
    assert!(!check_sandwich(&above, &aux, 1e-8));
}

#[test]
fn random_sandwich_instances_solve_inside_their_band() {
    let mut r = rng(42);
    for (p, n) in [(1.5, 15), (2.0, 31), (3.0, 15)] {
        let inst = random_sandwich_instance(&mut r, p, n).unwrap();
        let res = solve_auxiliary(&inst.prob, &inst.v, &inst.aux, None, &SolverConfig::default()).unwrap();
        assert!(res.sandwich_ok, "p {p}");
        assert!(residual_qvip(&inst.prob, &res.u, &res.eta, &inst.v, 1e-9).unwrap() <= 1e-8);
    }
}

#[test]
fn config_json_round_trip() {
    let c = preset("step-bifunction").unwrap();
    let text = serde_json::to_string_pretty(&c).unwrap();
    let back: GridConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    let bad = text.replace("\"n\"", "\"nodes\"");
    assert!(serde_json::from_str::<GridConfig>(&bad).is_err());
}

#[test]
fn shipped_preset_files_match_builtins() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets");
    for name in subpoint_core::grid::presets::NAMES {
        let path = dir.join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let c: GridConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(c, preset(name).unwrap(), "{name}");
    }
}
