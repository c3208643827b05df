use super::{Effort, SuiteReport, Tally};
use crate::fixpoint::{
    fixed_points, greatest_element, greatest_fixed_point_theorem, is_inductive, prop_meta_violation, smallest_element,
    smallest_fixed_point_theorem, subpoints,
};
use crate::gen::{random_gfp_instance, random_increasing_upward, random_lfp_instance, rng};
use crate::order::lattice_catalog;

/// Maximal subpoints, inclusion of fixed points in subpoints, inductivity of
/// subpoints, and the greatest/smallest fixed point theorems against
/// enumeration.
pub fn verify_fixpoint(seed: u64, effort: Effort) -> SuiteReport {
    let mut rng = rng(seed);
    let small = lattice_catalog(5);
    let all = lattice_catalog(6);
    let mut checks = Vec::new();

    let per_lattice = effort.pick(1_000, 40);
    let mut meta = Tally::new("maximal-subpoints-are-maximal-fixed-points");
    let mut incl = Tally::new("fixed-points-are-subpoints");
    let mut induct = Tally::new("subpoints-inductive");
    let mut nonempty = Tally::new("subpoints-nonempty");
    for lat in &small {
        for k in 0..per_lattice {
            let empty_p = if k % 4 == 0 { 0.2 } else { 0.0 };
            let s = random_increasing_upward(&mut rng, lat, empty_p);
            let res = prop_meta_violation(&s);
            meta.record(matches!(res, Ok(None)), || format!("{res:?} for values {:?}", s.values()));
            let (sub, fix) = (subpoints(&s), fixed_points(&s));
            incl.record(fix.is_subset(&sub), || format!("fix {fix:?} not inside sub {sub:?}"));
            // empty values are not inductive, so only the nonempty draws qualify
            if empty_p == 0.0 && k % 10 == 1 {
                induct.record(is_inductive(&sub, lat.poset()), || format!("values {:?}", s.values()));
            }
            if empty_p == 0.0 {
                nonempty.record(!sub.is_empty(), || format!("values {:?}", s.values()));
            }
        }
    }
    checks.extend([meta.finish(), incl.finish(), induct.finish(), nonempty.finish()]);

    let instances = effort.pick(200, 20);
    let mut great = Tally::new("greatest-fixed-point-theorem");
    let mut least = Tally::new("smallest-fixed-point-theorem");
    for k in 0..instances {
        let lat = &all[k % all.len()];
        let p = lat.poset();
        let (s, sub, start) = random_gfp_instance(&mut rng, lat);
        let brute = greatest_element(&fixed_points(&s), p);
        match greatest_fixed_point_theorem(&s, &sub, lat, start) {
            Ok(r) => great.record(Some(r.point) == brute && p.leq(start, r.point), || {
                format!("theorem gave {} but enumeration gave {brute:?}", r.point)
            }),
            Err(e) => great.record(false, || e.to_string()),
        }
        let (s, sup, start) = random_lfp_instance(&mut rng, lat);
        let brute = smallest_element(&fixed_points(&s), p);
        match smallest_fixed_point_theorem(&s, &sup, lat, start) {
            Ok(r) => least.record(Some(r.point) == brute && p.leq(r.point, start), || {
                format!("theorem gave {} but enumeration gave {brute:?}", r.point)
            }),
            Err(e) => least.record(false, || e.to_string()),
        }
    }
    checks.extend([great.finish(), least.finish()]);

    SuiteReport { suite: "fixpoint".into(), seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_fixpoint_suite_passes() {
        let r = verify_fixpoint(5, Effort::Quick);
        assert!(r.all_passed(), "{:?}", r.first_failure());
    }
}
