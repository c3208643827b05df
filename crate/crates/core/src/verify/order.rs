use num_rational::Rational64;
use rand::Rng;

use super::{Effort, SuiteReport, Tally};
use crate::gen::{random_transitivity_triple, rng};
use crate::order::{
    all_subsets, check_modified_transitivity, distributive_identity_holds, is_submodular, is_t_monotone,
    lattice_catalog, linear_functional, poset_catalog, precsim, precsim_at, precsim_linear, star_leq, strong_set_order,
    Elem, ElemSet, ExtendedFunctional, FiniteLattice, FinitePoset, GridLattice,
};

fn star_preorder(t: &mut Tally, p: &FinitePoset) {
    let subsets: Vec<ElemSet> = all_subsets(p.len()).collect();
    // relation matrix first, then transitivity on it
    let k = subsets.len();
    let mut rel = vec![false; k * k];
    for (i, a) in subsets.iter().enumerate() {
        for (j, b) in subsets.iter().enumerate() {
            rel[i * k + j] = star_leq(a, b, p).expect("carrier");
        }
        t.record(rel[i * k + i], || format!("{a:?} is not <=* itself"));
    }
    for i in 0..k {
        for j in 0..k {
            if !rel[i * k + j] {
                continue;
            }
            for l in 0..k {
                if rel[j * k + l] && !rel[i * k + l] {
                    t.record(false, || {
                        format!("{:?} <=* {:?} <=* {:?} but not transitively", subsets[i], subsets[j], subsets[l])
                    });
                }
            }
        }
    }
}

fn random_rational<R: Rng>(rng: &mut R, span: i64) -> Rational64 {
    Rational64::new(rng.gen_range(-span..=span), rng.gen_range(1..=3))
}

fn random_grid<R: Rng>(rng: &mut R, dim: usize) -> GridLattice {
    let axes = (0..dim)
        .map(|_| {
            let mut axis: Vec<Rational64> = Vec::new();
            let want = rng.gen_range(2..=3);
            while axis.len() < want {
                let x = random_rational(rng, 3);
                if !axis.contains(&x) {
                    axis.push(x);
                }
            }
            axis
        })
        .collect();
    GridLattice::new(axes).expect("distinct values per axis")
}

/// Preorder laws, singleton reduction, strong set order versus indicators,
/// non-reflexivity on the square, modified transitivity, the distributive
/// identity, and the positivity characterisation of linear functionals.
pub fn verify_order(seed: u64, effort: Effort) -> SuiteReport {
    let mut rng = rng(seed);
    let lattices = lattice_catalog(6);
    let mut checks = Vec::new();

    let mut t = Tally::new("star-leq-preorder");
    for p in poset_catalog(5).iter().chain(lattices.iter().map(FiniteLattice::poset)) {
        star_preorder(&mut t, p);
    }
    checks.push(t.finish());

    let mut t = Tally::new("star-leq-singletons");
    for p in poset_catalog(5) {
        for a in p.elements() {
            for b in p.elements() {
                let lifted = star_leq(&ElemSet::singleton(a), &ElemSet::singleton(b), &p).expect("carrier");
                t.record(lifted == p.leq(a, b), || format!("{{{a}}} vs {{{b}}}"));
            }
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new("strong-set-order-indicators");
    for lat in &lattices {
        let n = lat.len();
        let nonempty: Vec<ElemSet> = all_subsets(n).filter(|s| !s.is_empty()).collect();
        let ind: Vec<ExtendedFunctional> =
            nonempty.iter().map(|s| ExtendedFunctional::indicator(n, s).expect("nonempty")).collect();
        for (i, a) in nonempty.iter().enumerate() {
            for (j, b) in nonempty.iter().enumerate() {
                let sso = strong_set_order(a, b, lat).expect("carrier");
                let pre = precsim(&ind[i], &ind[j], lat).expect("carrier");
                t.record(sso == pre, || format!("A={a:?} B={b:?} on a {n}-element lattice"));
            }
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new("precsim-not-reflexive");
    {
        let sq = FiniteLattice::square();
        let middle: ElemSet = [Elem(1), Elem(2)].into_iter().collect();
        let a = ExtendedFunctional::indicator(4, &middle).expect("nonempty");
        t.record(!is_submodular(&a, &sq).expect("carrier"), || {
            "indicator of the middle antichain is submodular".into()
        });
        let bottom = ExtendedFunctional::indicator(4, &ElemSet::singleton(sq.bottom())).expect("nonempty");
        let top = ExtendedFunctional::indicator(4, &ElemSet::singleton(sq.top())).expect("nonempty");
        t.record(precsim(&bottom, &top, &sq).expect("carrier"), || "I_bottom is not below I_top".into());
        t.record(!precsim(&top, &bottom, &sq).expect("carrier"), || "I_top is below I_bottom".into());
        for lat in &lattices {
            let z = ExtendedFunctional::zero(lat.len());
            t.record(precsim(&z, &z, lat).expect("carrier"), || "zero functional is not submodular".into());
        }
    }
    checks.push(t.finish());

    let distributive: Vec<&FiniteLattice> = lattices.iter().filter(|l| l.is_distributive()).collect();
    let mut t = Tally::new("modified-transitivity");
    for k in 0..effort.pick(10_000, 500) {
        let lat = distributive[k % distributive.len()];
        let (a, b, c) = random_transitivity_triple(&mut rng, lat);
        let res = check_modified_transitivity(&a, &b, &c, lat);
        t.record(res == Ok(true), || format!("{res:?} for a={a:?} b={b:?} c={c:?}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new("distributive-identity");
    for lat in &distributive {
        t.record(distributive_identity_holds(lat), || format!("{}-element distributive lattice", lat.len()));
    }
    t.record(!distributive_identity_holds(&FiniteLattice::n5()), || "identity holds on N5".into());
    checks.push(t.finish());

    let mut t = Tally::new("positivity-characterization");
    for _ in 0..effort.pick(1_000, 100) {
        let dim = rng.gen_range(1..=3);
        let grid = random_grid(&mut rng, dim);
        let a: Vec<Rational64> = (0..dim).map(|_| random_rational(&mut rng, 4)).collect();
        let b: Vec<Rational64> = if rng.gen_bool(0.5) {
            a.iter().map(|&x| x - Rational64::new(rng.gen_range(0..=3), rng.gen_range(1..=2))).collect()
        } else {
            (0..dim).map(|_| random_rational(&mut rng, 4)).collect()
        };
        let fa = linear_functional(&a, &grid).expect("dimension");
        let fb = linear_functional(&b, &grid).expect("dimension");
        let lhs = precsim(&fa, &fb, grid.lattice()).expect("carrier");
        let rhs = precsim_linear(&a, &b).expect("dimension");
        t.record(lhs == rhs, || format!("a={a:?} b={b:?} grid={:?}", grid.points()));
    }
    checks.push(t.finish());

    let mut t = Tally::new("t-monotone-consequence");
    for _ in 0..effort.pick(300, 30) {
        let dim = rng.gen_range(1..=3);
        let grid = random_grid(&mut rng, dim);
        let c: Vec<Rational64> = (0..dim).map(|_| random_rational(&mut rng, 3)).collect();
        let d: Vec<Rational64> = (0..dim).map(|_| Rational64::new(rng.gen_range(0..=2), 1)).collect();
        let table: Vec<Vec<Vec<Rational64>>> = grid
            .points()
            .iter()
            .map(|u| vec![c.iter().zip(&d).zip(u).map(|((ci, di), ui)| ci + di * ui).collect()])
            .collect();
        t.record(is_t_monotone(&table, &grid), || format!("diagonal table not T-monotone: c={c:?} d={d:?}"));
        let lat = grid.lattice();
        for u in lat.elements() {
            for w in lat.elements() {
                let a = linear_functional(&table[u.index()][0], &grid).expect("dimension");
                let b = linear_functional(&table[w.index()][0], &grid).expect("dimension");
                t.record(precsim_at(&a, &b, u, w, lat), || format!("pair {u},{w} with c={c:?} d={d:?}"));
            }
        }
    }
    checks.push(t.finish());

    SuiteReport { suite: "order".into(), seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_order_suite_passes() {
        let r = verify_order(3, Effort::Quick);
        assert!(r.all_passed(), "{:?}", r.first_failure());
    }
}
