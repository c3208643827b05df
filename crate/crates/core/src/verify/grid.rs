use num_rational::Rational64;
use rand::Rng;

use super::{CheckOutcome, Effort, SuiteReport, Tally};
use crate::extremal::{
    brute_force_extremal, brute_force_solutions, directedness_witness, greatest_solution, smallest_solution,
    verify_subsolution, verify_supersolution, ExtremalConfig,
};
use crate::gen::{rng, Rng64};
use crate::grid::presets::{preset, NAMES};
use crate::grid::{
    apply_e, cutoff_d, cutoff_growth_constant, cutoff_lower_bound_constants, gradient_norm, load_profile_solution,
    lp_norm, pairing, residual_qvip, solution_gradient_bound, solve_auxiliary, AffineObstacle, AuxData, GridError,
    GridProblem, Jump, SolverConfig, StepBifunction,
};
use crate::order::{strong_set_order, ElemSet, GridLattice};

const P_VALUES: [f64; 3] = [1.5, 2.0, 3.0];
const N_VALUES: [usize; 4] = [15, 31, 63, 129];

/// A truncated problem with two sub- and two supersolutions at parameter `v`.
#[derive(Clone, Debug)]
pub struct SandwichInstance {
    /// Bounds enclose both sub- and both supersolutions; they are not
    /// themselves certified.
    pub prob: GridProblem,
    pub v: Vec<f64>,
    pub aux: AuxData,
}

fn random_step_function(rng: &mut Rng64, n: usize, scale: f64) -> StepBifunction {
    let base = rng.gen_range(1.0..8.0);
    let offset = (0..n).map(|_| -base * rng.gen_range(0.6..1.0)).collect();
    let width = (0..n).map(|_| if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..1.0) }).collect();
    let s_jumps = (0..rng.gen_range(0..=2))
        .map(|_| Jump { at: rng.gen_range(-0.5..1.0) * scale, height: rng.gen_range(0.0..2.0) })
        .collect();
    let t_jumps = (0..rng.gen_range(1..=2))
        .map(|_| Jump { at: rng.gen_range(-0.5..1.0) * scale, height: -rng.gen_range(0.0..4.0) })
        .collect();
    let s_slope = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..2.0) };
    StepBifunction { offset, width, s_slope, s_jumps, t_jumps }
}

fn load_profile(rng: &mut Rng64, n: usize, level: f64) -> Vec<f64> {
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let freq = rng.gen_range(1.0..4.0);
    let depth = rng.gen_range(0.0..0.7);
    (0..n)
        .map(|i| {
            let x = (i as f64 + 1.0) / (n as f64 + 1.0);
            level * (1.0 + depth * (freq * std::f64::consts::TAU * x + phase).sin())
        })
        .collect()
}

/// Typical magnitude of `E u = 1` solutions for exponent `p`.
fn magnitude(p: f64) -> f64 {
    // |u| ~ (1/8)^(1/(p-1)) for the unit load on (0, 1)
    0.5f64.powf(3.0 / (p - 1.0)).max(1e-3)
}

/// Random instance for the sandwich suite. Sub- and supersolutions solve
/// `E u = -load` and `E u = +load` for oscillating load profiles, scaled up
/// until they certify at their own parameter.
pub fn random_sandwich_instance(rng: &mut Rng64, p: f64, n: usize) -> Result<SandwichInstance, GridError> {
    let scale = magnitude(p) * 8.0;
    let f = random_step_function(rng, n, scale);
    let bound = (0..n).map(|i| f.growth_bound(i, -scale, scale)).fold(0.0, f64::max) + 1.0;
    let profiles: Vec<Vec<f64>> = (0..4)
        .map(|_| {
            let level = rng.gen_range(1.0..2.0);
            load_profile(rng, n, level)
        })
        .collect();
    let with_obstacle = rng.gen_bool(0.75);
    let (local_slope, mean_slope) =
        (rng.gen_range(0.0..0.8), if rng.gen_bool(0.5) { rng.gen_range(0.0..0.3) } else { 0.0 });
    let fraction = rng.gen_range(0.3..1.2);
    let mut level = bound;
    for _ in 0..8 {
        let solve = |k: usize, sign: f64| -> Result<Vec<f64>, GridError> {
            let load: Vec<f64> = profiles[k].iter().map(|x| sign * x * level).collect();
            load_profile_solution(p, 1.0, &load)
        };
        let lower = [solve(0, -1.0)?, solve(1, -1.0)?];
        let upper = [solve(2, 1.0)?, solve(3, 1.0)?];
        let depth = lower.iter().flatten().fold(0.0f64, |m, x| m.max(-x));
        let height = upper.iter().flatten().fold(0.0f64, |m, x| m.max(*x));
        let obstacle = with_obstacle.then(|| AffineObstacle {
            base: (0..n)
                .map(|i| {
                    let x = (i as f64 + 1.0) / (n as f64 + 1.0);
                    (local_slope + mean_slope) * depth
                        + 0.02 * height
                        + fraction * height * (0.7 + 0.3 * (3.0 * x).cos())
                })
                .collect(),
            local_slope,
            mean_slope,
        });
        let prob = GridProblem::new(n, p, 1.0, f.clone(), obstacle, lower[0].clone(), upper[0].clone())?;
        let tol = 1e-10;
        let subs_ok = lower.iter().all(|u| verify_subsolution(&prob, u, u, tol).is_ok());
        let sups_ok = upper.iter().all(|u| verify_supersolution(&prob, u, u, tol).is_ok());
        if !(subs_ok && sups_ok) {
            level *= 2.0;
            continue;
        }
        let lo: Vec<f64> = (0..n).map(|i| lower[0][i].max(lower[1][i])).collect();
        let hi: Vec<f64> = (0..n).map(|i| upper[0][i].min(upper[1][i])).collect();
        let v: Vec<f64> = (0..n).map(|i| lo[i] + rng.gen_range(0.0..1.0) * (hi[i] - lo[i])).collect();
        let eta_lo = |u: &Vec<f64>| (0..n).map(|i| prob.interval(i, u[i], v[i]).0).collect::<Vec<_>>();
        let eta_hi = |u: &Vec<f64>| (0..n).map(|i| prob.interval(i, u[i], v[i]).1).collect::<Vec<_>>();
        let aux = AuxData::new(
            [lower[0].clone(), lower[1].clone()],
            [eta_lo(&lower[0]), eta_lo(&lower[1])],
            [upper[0].clone(), upper[1].clone()],
            [eta_hi(&upper[0]), eta_hi(&upper[1])],
        )?;
        // the truncated band must sit inside [sub, super] of the problem
        let mut sub = prob.sub.clone();
        let mut sup = prob.sup.clone();
        for i in 0..n {
            sub[i] = sub[i].min(lower[1][i]);
            sup[i] = sup[i].max(upper[1][i]);
        }
        let prob = prob.with_bounds(sub, sup)?;
        return Ok(SandwichInstance { prob, v, aux });
    }
    Err(GridError::Config("could not certify random sub/supersolutions".into()))
}

fn describe(k: usize, p: f64, n: usize) -> String {
    format!("instance {k} (p = {p}, n = {n})")
}

/// Every truncated solve lands in its band and solves the untruncated
/// problem at the parameter. Also records whether every solution is a
/// sub- and supersolution and respects the a-priori gradient bound.
pub fn sandwich_check(seed: u64, effort: Effort) -> Vec<CheckOutcome> {
    let mut rng = rng(seed);
    let per_cell = effort.pick(5, 1);
    let sizes: &[usize] = match effort {
        Effort::Full => &N_VALUES,
        Effort::Quick => &N_VALUES[..2],
    };
    let cfg = SolverConfig::default();
    let mut sandwich = Tally::new("sandwich");
    let mut both = Tally::new("solutions-are-sub-and-supersolutions");
    let mut bound = Tally::new("solution-gradient-bound");
    let mut k = 0;
    for &p in &P_VALUES {
        for &n in sizes {
            for _ in 0..per_cell {
                k += 1;
                let inst = match random_sandwich_instance(&mut rng, p, n) {
                    Ok(i) => i,
                    Err(e) => {
                        sandwich.record(false, || format!("{}: {e}", describe(k, p, n)));
                        continue;
                    }
                };
                let res = solve_auxiliary(&inst.prob, &inst.v, &inst.aux, None, &cfg);
                let res = match res {
                    Ok(r) => r,
                    Err(e) => {
                        sandwich.record(false, || format!("{}: {e}", describe(k, p, n)));
                        continue;
                    }
                };
                let r = residual_qvip(&inst.prob, &res.u, &res.eta, &inst.v, cfg.contact_tol);
                let ok = res.sandwich_ok && matches!(r, Ok(x) if x <= 1e-8);
                sandwich.record(ok, || format!("{}: sandwich {} residual {r:?}", describe(k, p, n), res.sandwich_ok));
                if ok {
                    let s = verify_subsolution(&inst.prob, &res.u, &inst.v, 1e-8);
                    let t = verify_supersolution(&inst.prob, &res.u, &inst.v, 1e-8);
                    both.record(s.is_ok() && t.is_ok(), || format!("{}: {s:?} {t:?}", describe(k, p, n)));
                    let g = gradient_norm(&res.u, p, inst.prob.h());
                    let b = solution_gradient_bound(&inst.prob);
                    bound.record(g <= b * (1.0 + 1e-12), || format!("{}: |Du| = {g} > {b}", describe(k, p, n)));
                }
            }
        }
    }
    vec![sandwich.finish(), both.finish(), bound.finish()]
}

fn random_aux(rng: &mut Rng64, n: usize) -> (StepBifunction, AuxData) {
    let f = random_step_function(rng, n, 1.0);
    let draw = |rng: &mut Rng64, lo: f64, hi: f64| -> Vec<f64> {
        (0..n).map(|_| (rng.gen_range(lo..hi) * 8.0f64).round() / 8.0).collect()
    };
    let l0 = draw(rng, -1.0, 0.5);
    let mut l1 = draw(rng, -1.0, 0.5);
    let u0 = draw(rng, 0.5, 2.0);
    let mut u1 = draw(rng, 0.5, 2.0);
    for i in 0..n {
        if rng.gen_bool(0.2) {
            l1[i] = l0[i];
        }
        if rng.gen_bool(0.2) {
            u1[i] = u0[i];
        }
    }
    let v = draw(rng, -0.5, 1.5);
    let lo_sel = |u: &[f64]| (0..n).map(|i| f.interval(i, u[i], v[i]).0).collect::<Vec<_>>();
    let hi_sel = |u: &[f64]| (0..n).map(|i| f.interval(i, u[i], v[i]).1).collect::<Vec<_>>();
    let aux = AuxData::new(
        [l0.clone(), l1.clone()],
        [lo_sel(&l0), lo_sel(&l1)],
        [u0.clone(), u1.clone()],
        [hi_sel(&u0), hi_sel(&u1)],
    )
    .expect("finite data of one length");
    (f, aux)
}

/// Both compensator inequalities below/above each sub/supersolution, and
/// `h = 0` on the band.
pub fn compensator_check(seed: u64, effort: Effort) -> Vec<CheckOutcome> {
    let mut rng = rng(seed);
    let target = effort.pick(100_000, 5_000);
    let mut below = Tally::new("compensator-below");
    let mut above = Tally::new("compensator-above");
    let mut band = Tally::new("compensator-zero-on-band");
    while below.samples + above.samples + band.samples < target as u64 {
        let n = rng.gen_range(3..=20);
        let (_f, aux) = random_aux(&mut rng, n);
        for _ in 0..10 {
            for i in 0..n {
                for k in 0..2 {
                    let s = aux.lower[k][i] - 2.0 * rng.gen_range(0.0f64..1.0).powi(3) - 1e-12;
                    let e = aux.lo_eta[i] - aux.lower_eta[k][i] - aux.compensator(i, s);
                    below.record(e <= 1e-12, || format!("node {i}, k {k}, s {s}: {e}"));
                    let s = aux.upper[k][i] + 2.0 * rng.gen_range(0.0f64..1.0).powi(3) + 1e-12;
                    let e = aux.upper_eta[k][i] - aux.hi_eta[i] + aux.compensator(i, s);
                    above.record(e <= 1e-12, || format!("node {i}, k {k}, s {s}: {e}"));
                }
                let s = aux.lo[i] + rng.gen_range(0.0..=1.0) * (aux.hi[i] - aux.lo[i]);
                let h = aux.compensator(i, s);
                band.record(h == 0.0, || format!("node {i}, s {s}: h = {h}"));
            }
        }
    }
    vec![below.finish(), above.finish(), band.finish()]
}

fn within(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= &(y + tol))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Quantised oracle, directedness witnesses, and driver order on random
/// instances.
pub fn extremality_check(seed: u64, effort: Effort) -> Vec<CheckOutcome> {
    let mut rng = rng(seed);
    let cfg = ExtremalConfig::default();
    let mut oracle = Tally::new("quantized-oracle");
    let mut directed = Tally::new("directedness-witness");
    let mut order = Tally::new("smallest-below-greatest");

    let qc = preset("quantized").expect("preset");
    let levels = qc.levels.clone().expect("levels");
    let step = levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let prob = qc.build().expect("preset builds");
    match (brute_force_extremal(&prob, &levels, 1e-9), greatest_solution(&prob, &cfg), smallest_solution(&prob, &cfg)) {
        (Ok(bf), Ok(g), Ok(s)) => {
            let (Some(max), Some(min)) = (bf.greatest.clone(), bf.smallest.clone()) else {
                oracle.record(false, || "enumerated solutions have no extrema".into());
                return vec![oracle.finish(), directed.finish(), order.finish()];
            };
            for u in &bf.solutions {
                oracle.record(within(&min, u, 0.0) && within(u, &max, 0.0), || {
                    format!("{u:?} outside [{min:?}, {max:?}]")
                });
            }
            oracle.record(max_gap(&g.u, &max) <= step, || format!("greatest {:?} vs {max:?}", g.u));
            oracle.record(max_gap(&s.u, &min) <= step, || format!("smallest {:?} vs {min:?}", s.u));
            oracle.record(min != max, || "oracle instance has a single solution".into());
            order.record(within(&s.u, &g.u, 1e-8), || format!("{:?} vs {:?}", s.u, g.u));

            // directedness at a few quantised parameters
            let mut params = vec![prob.sup.clone(), max.clone()];
            params.extend(bf.solutions.iter().take(3).cloned());
            for v in &params {
                let sols = brute_force_solutions(&prob, &levels, Some(v), 1e-9).unwrap_or_default();
                for (a, u1) in sols.iter().enumerate() {
                    for u2 in sols.iter().skip(a + 1) {
                        let join: Vec<f64> = u1.iter().zip(u2).map(|(x, y)| x.max(*y)).collect();
                        let res = directedness_witness(&prob, v, u1, u2, &cfg);
                        let ok = match &res {
                            Ok(w) => {
                                within(&join, w, 1e-8)
                                    && crate::extremal::solution_residual(&prob, w, v, cfg.solver.contact_tol)
                                        .map(|(r, _)| r <= 1e-8)
                                        .unwrap_or(false)
                            }
                            Err(_) => false,
                        };
                        directed.record(ok, || format!("v {v:?}, u1 {u1:?}, u2 {u2:?}: {res:?}"));
                    }
                }
            }
        }
        (a, b, c) => oracle.record(false, || format!("{:?} / {:?} / {:?}", a.err(), b.err(), c.err())),
    }

    for &p in &P_VALUES {
        for &n in &N_VALUES[..2] {
            for _ in 0..effort.pick(2, 1) {
                let inst = match random_sandwich_instance(&mut rng, p, n) {
                    Ok(i) => i,
                    Err(e) => {
                        order.record(false, || e.to_string());
                        continue;
                    }
                };
                // the two crossing subsolutions stay subsolutions at v above both;
                // the top of the band must be a single supersolution
                let (u1, u2) = (&inst.aux.lower[0], &inst.aux.lower[1]);
                let join: Vec<f64> = u1.iter().zip(u2).map(|(x, y)| x.max(*y)).collect();
                let banded = inst.prob.with_bounds(inst.prob.sub.clone(), inst.aux.upper[0].clone()).expect("ordered");
                let res = directedness_witness(&banded, &inst.v, u1, u2, &cfg);
                let ok = match &res {
                    Ok(w) => {
                        within(&join, w, 1e-8)
                            && crate::extremal::solution_residual(&banded, w, &inst.v, cfg.solver.contact_tol)
                                .map(|(r, _)| r <= 1e-8)
                                .unwrap_or(false)
                    }
                    Err(_) => false,
                };
                directed.record(ok, || format!("p {p}, n {n}: {:?}", res.err()));
                let prob =
                    inst.prob.with_bounds(inst.aux.lower[0].clone(), inst.aux.upper[0].clone()).expect("ordered");
                match (smallest_solution(&prob, &cfg), greatest_solution(&prob, &cfg)) {
                    (Ok(s), Ok(g)) => {
                        order.record(within(&s.u, &g.u, 1e-8), || format!("p {p}, n {n}: gap {}", max_gap(&s.u, &g.u)))
                    }
                    (a, b) => order.record(false, || format!("p {p}, n {n}: {:?} / {:?}", a.err(), b.err())),
                }
            }
        }
    }
    vec![oracle.finish(), directed.finish(), order.finish()]
}

/// Both drivers on every preset: convergence, fixed-point residual, order.
pub fn preset_smoke_check(effort: Effort) -> CheckOutcome {
    let _ = effort;
    let cfg = ExtremalConfig::default();
    let mut t = Tally::new("presets-extremal-solutions");
    for name in NAMES {
        let prob = match preset(name).expect("known preset").build() {
            Ok(p) => p,
            Err(e) => {
                t.record(false, || format!("{name}: {e}"));
                continue;
            }
        };
        match (smallest_solution(&prob, &cfg), greatest_solution(&prob, &cfg)) {
            (Ok(s), Ok(g)) => {
                let ordered =
                    within(&prob.sub, &s.u, 1e-8) && within(&s.u, &g.u, 1e-8) && within(&g.u, &prob.sup, 1e-8);
                let fixed = s.residual <= 1e-8 && g.residual <= 1e-8;
                t.record(ordered && fixed, || {
                    format!("{name}: ordered {ordered}, residuals {:.3e} / {:.3e}", s.residual, g.residual)
                });
            }
            (a, b) => t.record(false, || format!("{name}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    t.finish()
}

fn random_vector(rng: &mut Rng64, n: usize, span: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-span..span)).collect()
}

/// Grid-level properties plus the sandwich, compensator, extremality and
/// preset checks.
pub fn verify_grid(seed: u64, effort: Effort) -> SuiteReport {
    let mut rng = rng(seed);
    let mut checks = Vec::new();

    let mut t = Tally::new("stencil-monotone");
    for _ in 0..effort.pick(2_000, 200) {
        let p = P_VALUES[rng.gen_range(0..3)];
        let n = rng.gen_range(1..40);
        let prob = GridProblem::new(n, p, 1.0, StepBifunction::constant(n, 0.0), None, vec![0.0; n], vec![0.0; n])
            .expect("valid");
        let u = random_vector(&mut rng, n, 2.0);
        let w = random_vector(&mut rng, n, 2.0);
        let eu = apply_e(&u, &prob).expect("finite");
        let ew = apply_e(&w, &prob).expect("finite");
        let de: Vec<f64> = eu.iter().zip(&ew).map(|(a, b)| a - b).collect();
        let du: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a - b).collect();
        let scale = de.iter().map(|x| x.abs()).sum::<f64>() * 1e-12;
        t.record(pairing(&de, &du, prob.h()) >= -scale, || format!("p {p}, u {u:?}, w {w:?}"));
    }
    checks.push(t.finish());

    let mut growth = Tally::new("cutoff-growth");
    let mut lower = Tally::new("cutoff-coercive-lower-bound");
    for _ in 0..effort.pick(2_000, 200) {
        let p = rng.gen_range(1.1..4.0);
        let n = rng.gen_range(1..30);
        let h = 1.0 / (n as f64 + 1.0);
        let a = random_vector(&mut rng, n, 2.0);
        let b = random_vector(&mut rng, n, 2.0);
        let lo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect();
        let hi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
        let u = random_vector(&mut rng, n, 4.0);
        let d: Vec<f64> = (0..n).map(|i| cutoff_d(u[i], lo[i], hi[i], p)).collect();
        let d0 = cutoff_growth_constant(p);
        let pw = |x: f64| x.abs().powf(p - 1.0);
        let ok = (0..n).all(|i| d[i].abs() <= d0 * (pw(lo[i]) + pw(u[i]) + pw(hi[i])) * (1.0 + 1e-12));
        growth.record(ok, || format!("p {p}, u {u:?}, lo {lo:?}, hi {hi:?}"));
        let (d3, c3) = cutoff_lower_bound_constants(p);
        let lhs = pairing(&d, &u, h);
        let rhs = d3 * lp_norm(&u, p, h).powf(p) - c3 * (lp_norm(&lo, p, h).powf(p) + lp_norm(&hi, p, h).powf(p));
        lower.record(lhs >= rhs - 1e-9, || format!("p {p}: {lhs} < {rhs}"));
    }
    checks.extend([growth.finish(), lower.finish()]);

    let mut t = Tally::new("obstacle-permanence");
    let levels = [Rational64::new(0, 1), Rational64::new(1, 2), Rational64::new(1, 1)];
    for _ in 0..effort.pick(60, 10) {
        let n = rng.gen_range(2..=3);
        let grid = GridLattice::new(vec![levels.to_vec(); n]).expect("distinct levels");
        let lat = grid.lattice();
        let ob = AffineObstacle {
            base: (0..n).map(|_| rng.gen_range(-0.2..1.0)).collect(),
            local_slope: rng.gen_range(0.0..1.0),
            mean_slope: rng.gen_range(0.0..0.5),
        };
        let as_f64 = |e: crate::order::Elem| -> Vec<f64> {
            grid.point(e).iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect()
        };
        let admissible: Vec<ElemSet> = lat
            .elements()
            .map(|v| {
                let psi = ob.eval(&as_f64(v));
                lat.elements().filter(|&w| as_f64(w).iter().zip(&psi).all(|(x, y)| x <= y)).collect()
            })
            .collect();
        for v in lat.elements() {
            for w in lat.elements().filter(|&w| lat.leq(v, w)) {
                let ok = strong_set_order(&admissible[v.index()], &admissible[w.index()], lat).expect("carrier");
                t.record(ok, || format!("C({v}) vs C({w}) with {ob:?}"));
            }
        }
    }
    checks.push(t.finish());

    checks.extend(sandwich_check(seed ^ 0x5a, effort));
    checks.extend(compensator_check(seed ^ 0xc0, effort));
    checks.extend(extremality_check(seed ^ 0xe7, effort));
    checks.push(preset_smoke_check(effort));

    SuiteReport { suite: "grid".into(), seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_instances_certify() {
        let mut r = rng(1);
        for &p in &P_VALUES {
            let inst = random_sandwich_instance(&mut r, p, 15).unwrap();
            inst.aux.validate(&inst.prob, &inst.v, 1e-9).unwrap();
            assert!(inst.aux.compensator_violations(1e-12).is_empty());
        }
    }

    #[test]
    fn compensator_quick() {
        for c in compensator_check(2, Effort::Quick) {
            assert!(c.ok(), "{c:?}");
        }
    }
}
