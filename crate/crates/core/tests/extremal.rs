mod common;

use common::{leq, max_gap};
use subpoint_core::extremal::{
    brute_force_extremal, fixed_point_residual, greatest_solution, smallest_solution, verify_subsolution,
    verify_supersolution, ExtremalConfig, ExtremalError,
};
use subpoint_core::grid::presets::{preset, NAMES};

#[test]
fn drivers_bracket_every_preset() {
    let cfg = ExtremalConfig::default();
    for name in NAMES {
        let prob = preset(name).unwrap().build().unwrap();
        let s = smallest_solution(&prob, &cfg).unwrap();
        let g = greatest_solution(&prob, &cfg).unwrap();
        assert!(s.residual <= 1e-8 && g.residual <= 1e-8, "{name}");
        assert!(leq(&prob.sub, &s.u, 1e-8) && leq(&s.u, &g.u, 1e-8) && leq(&g.u, &prob.sup, 1e-8), "{name}");
        for w in g.steps.windows(2) {
            assert_eq!(w[1].step, w[0].step + 1);
        }
    }
}

#[test]
fn parameter_free_problem_settles_after_one_step() {
    let prob = preset("plain-obstacle").unwrap().build().unwrap();
    let g = greatest_solution(&prob, &ExtremalConfig::default()).unwrap();
    assert_eq!(g.outer_iterations(), 2);
    assert!(g.steps[1].max_update < 1e-10);
}

#[test]
fn quantized_preset_against_enumeration() {
    let c = preset("quantized").unwrap();
    let levels = c.levels.clone().unwrap();
    let prob = c.build().unwrap();
    let bf = brute_force_extremal(&prob, &levels, 1e-9).unwrap();
    let (max, min) = (bf.greatest.unwrap(), bf.smallest.unwrap());
    assert_eq!(max, vec![0.75, 1.0, 0.75]);
    assert_eq!(min, vec![0.0; 3]);
    let cfg = ExtremalConfig::default();
    let g = greatest_solution(&prob, &cfg).unwrap();
    let s = smallest_solution(&prob, &cfg).unwrap();
    assert!(max_gap(&g.u, &max) <= 0.25);
    assert!(max_gap(&s.u, &min) <= 0.25);
    // every enumerated solution is a fixed point
    for u in &bf.solutions {
        assert!(fixed_point_residual(&prob, u, 1e-9).unwrap().0 <= 1e-8);
    }
}

#[test]
fn bounds_certify_and_wrong_bounds_do_not() {
    let prob = preset("step-bifunction").unwrap().build().unwrap();
    assert!(verify_subsolution(&prob, &prob.sub, &prob.sub, 1e-8).is_ok());
    assert!(verify_supersolution(&prob, &prob.sup, &prob.sup, 1e-8).is_ok());
    // the supersolution is far too high to be a subsolution
    assert!(matches!(verify_subsolution(&prob, &prob.sup, &prob.sup, 1e-8), Err(ExtremalError::NotSubsolution { .. })));
}
