use super::{Effort, SuiteReport, Tally};
use crate::fixpoint::fixed_points;
use crate::gen::{random_dependence_pair, random_qvip, random_qvip_with_parameter, rng};
use crate::order::{lattice_catalog, ElemSet};
use crate::qvip::{certifies, partner_domain_gaps, solution_operator, solve_parameterized, QvipInstance};

/// Solutions of the self-parameterised problem by a direct loop that does
/// not go through the solution operator.
fn direct_fixed_solutions(inst: &QvipInstance) -> ElemSet {
    let mut out = ElemSet::new();
    for u in inst.lattice().elements() {
        if !inst.admissible(u, u).contains(u) {
            continue;
        }
        let tests = inst.tests(u, u);
        if inst.functionals(u, u).iter().any(|a| certifies(a, u, tests)) {
            out.insert(u);
        }
    }
    out
}

/// Monotone dependence, fixed points of the solution operator, and inclusion
/// of solutions in the suboperator's solutions.
pub fn verify_qvip(seed: u64, effort: Effort) -> SuiteReport {
    let mut rng = rng(seed);
    let lattices = lattice_catalog(5);
    let mut checks = Vec::new();

    // the plain check counts every hypothesis-satisfying pair; the second
    // one also asks for a partner finite at each solution
    let mut t = Tally::new("dependence-lemma");
    let mut finite = Tally::new("dependence-lemma-finite-partner");
    for k in 0..effort.pick(1_000, 60) {
        let lat = &lattices[k % lattices.len()];
        let (inst, inst2, v, v2) = random_dependence_pair(&mut rng, lat);
        let res = crate::qvip::check_dependence(&inst, &inst2, v, v2);
        let gaps = partner_domain_gaps(&inst, &inst2, v, v2).expect("same lattice");
        t.record(res == Ok(true), || {
            format!("{res:?} at v={v}, v'={v2} on a {}-element lattice; no finite partner at {gaps:?}", lat.len())
        });
        if gaps.is_empty() {
            finite.record(res == Ok(true), || format!("{res:?} at v={v}, v'={v2} on a {}-element lattice", lat.len()));
        }
    }
    checks.extend([t.finish(), finite.finish()]);

    let mut t = Tally::new("fixed-points-solve-the-inclusion");
    for k in 0..effort.pick(300, 30) {
        let lat = &lattices[k % lattices.len()];
        let inst = random_qvip(&mut rng, lat);
        let via_operator = fixed_points(&solution_operator(&inst));
        let direct = direct_fixed_solutions(&inst);
        t.record(via_operator == direct, || format!("{via_operator:?} vs {direct:?}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new("solutions-inside-suboperator");
    let mut sup = Tally::new("solutions-inside-superoperator");
    for k in 0..effort.pick(200, 20) {
        let lat = &lattices[k % lattices.len()];
        let inst = random_qvip_with_parameter(&mut rng, lat);
        let lower = inst.build_sub_operator().expect("universe declared");
        let upper = inst.build_super_operator().expect("universe declared");
        for v in lat.elements() {
            let s = solve_parameterized(&inst, v).solutions;
            let ls = solve_parameterized(&lower, v).solutions;
            let us = solve_parameterized(&upper, v).solutions;
            t.record(s.is_subset(&ls), || format!("S({v}) = {s:?} not inside {ls:?}"));
            sup.record(s.is_subset(&us), || format!("S({v}) = {s:?} not inside {us:?}"));
        }
    }
    checks.extend([t.finish(), sup.finish()]);

    SuiteReport { suite: "qvip".into(), seed, checks }
}
