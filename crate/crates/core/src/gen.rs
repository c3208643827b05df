//! Seeded random instance generators for the property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::fixpoint::Multifunction;
use crate::order::{is_submodular, precsim, Elem, ElemSet, ExtValue, ExtendedFunctional, FiniteLattice};
use crate::qvip::QvipInstance;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random subset, each element kept with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> ElemSet {
    (0..n).filter(|_| rng.gen_bool(p)).map(Elem::from).collect()
}

/// Random functional with values in `values` or `+inf` (probability `inf_p`),
/// finite somewhere.
pub fn random_functional<R: Rng>(rng: &mut R, n: usize, values: &[i64], inf_p: f64) -> ExtendedFunctional {
    loop {
        let vals = (0..n)
            .map(|_| {
                if rng.gen_bool(inf_p) {
                    ExtValue::Infinite
                } else {
                    ExtValue::int(*values.choose(rng).expect("nonempty value set"))
                }
            })
            .collect();
        if let Ok(f) = ExtendedFunctional::new(vals) {
            return f;
        }
    }
}

/// `g(x) = max_{y <= x} r(y)` for random `r`: an isotone functional.
pub fn random_isotone<R: Rng>(rng: &mut R, lat: &FiniteLattice, values: &[i64], inf_p: f64) -> Vec<ExtValue> {
    let raw: Vec<ExtValue> = (0..lat.len())
        .map(|_| if rng.gen_bool(inf_p) { ExtValue::Infinite } else { ExtValue::int(*values.choose(rng).unwrap()) })
        .collect();
    lat.elements().map(|x| lat.poset().down_set(x).iter().map(|y| raw[y.index()]).max().expect("x <= x")).collect()
}

/// Order dual of [`random_isotone`].
pub fn random_antitone<R: Rng>(rng: &mut R, lat: &FiniteLattice, values: &[i64], inf_p: f64) -> Vec<ExtValue> {
    random_isotone(rng, &lat.dual(), values, inf_p)
}

fn add_values(a: &ExtendedFunctional, g: &[ExtValue]) -> Option<ExtendedFunctional> {
    ExtendedFunctional::new(a.values().iter().zip(g).map(|(&x, &y)| x + y).collect()).ok()
}

/// A submodular functional: rejection sampling first, then the indicator of a
/// random interval, plus a random isotone or antitone part when the sum stays
/// submodular.
pub fn random_submodular<R: Rng>(rng: &mut R, lat: &FiniteLattice) -> ExtendedFunctional {
    let n = lat.len();
    for _ in 0..8 {
        let f = random_functional(rng, n, &[0, 1, 2, 3], 0.3);
        if is_submodular(&f, lat).expect("same carrier") {
            return f;
        }
    }
    let a = Elem::from(rng.gen_range(0..n));
    let b = *lat.poset().up_set(a).iter().collect::<Vec<_>>().choose(rng).expect("a <= a");
    let interval = lat.poset().up_set(a).intersection(lat.poset().down_set(b));
    let base = ExtendedFunctional::indicator(n, &interval).expect("interval contains a");
    let shift = if rng.gen_bool(0.5) {
        random_isotone(rng, lat, &[0, 1, 2], 0.0)
    } else {
        random_antitone(rng, lat, &[0, 1, 2], 0.0)
    };
    match add_values(&base, &shift) {
        Some(f) if is_submodular(&f, lat).expect("same carrier") => f,
        _ => base,
    }
}

/// A triple with `a ≼ b`, `b ≼ b`, `b ≼ c`.
///
/// Mostly built as `a = b + isotone`, `c = b + antitone` around a submodular
/// `b`; a fraction of `a` and `c` are unstructured draws that happen to pass.
pub fn random_transitivity_triple<R: Rng>(
    rng: &mut R,
    lat: &FiniteLattice,
) -> (ExtendedFunctional, ExtendedFunctional, ExtendedFunctional) {
    let n = lat.len();
    let b = random_submodular(rng, lat);
    let pick = |rng: &mut R, lower: bool| -> ExtendedFunctional {
        for _ in 0..4 {
            let cand = random_functional(rng, n, &[-1, 0, 1, 2, 3], 0.3);
            let ok = if lower { precsim(&cand, &b, lat) } else { precsim(&b, &cand, lat) };
            if ok.expect("same carrier") {
                return cand;
            }
        }
        loop {
            let g = if lower {
                random_isotone(rng, lat, &[-1, 0, 1, 2], 0.2)
            } else {
                random_antitone(rng, lat, &[-1, 0, 1, 2], 0.2)
            };
            if let Some(f) = add_values(&b, &g) {
                return f;
            }
        }
    };
    let a = pick(rng, true);
    let c = pick(rng, false);
    (a, b, c)
}

/// Topological order of the carrier (by size of the principal ideal).
fn linear_extension(lat: &FiniteLattice) -> Vec<Elem> {
    let mut order: Vec<Elem> = lat.elements().collect();
    order.sort_by_key(|&e| (lat.poset().down_set(e).len(), e));
    order
}

/// Random increasing-upward multifunction on the lattice, values in the
/// whole carrier. Empty values occur when `empty_p > 0`.
pub fn random_increasing_upward<R: Rng>(rng: &mut R, lat: &FiniteLattice, empty_p: f64) -> Multifunction {
    let p = lat.poset();
    let n = lat.len();
    let mut values = vec![ElemSet::new(); n];
    for v in linear_extension(lat) {
        let mut val = if rng.gen_bool(empty_p) { ElemSet::new() } else { random_subset(rng, n, 0.35) };
        if val.is_empty() && !rng.gen_bool(empty_p) {
            val.insert(Elem::from(rng.gen_range(0..n)));
        }
        // every element of a value below v needs an upper bound in S(v)
        for u in p.down_set(v).iter().filter(|&u| u != v) {
            for a in values[u.index()].iter().collect::<Vec<_>>() {
                if !p.up_set(a).intersects(&val) {
                    let ups: Vec<Elem> = p.up_set(a).iter().collect();
                    val.insert(*ups.choose(rng).expect("a <= a"));
                }
            }
        }
        values[v.index()] = val;
    }
    Multifunction::on(p.clone(), values).expect("values lie in the carrier")
}

/// Random monotone self-map `m(x) = ⋁_{y <= x} r(y)`.
pub fn random_monotone_map<R: Rng>(rng: &mut R, lat: &FiniteLattice, identity_p: f64) -> Vec<Elem> {
    let n = lat.len();
    let raw: Vec<Elem> =
        lat.elements().map(|x| if rng.gen_bool(identity_p) { x } else { Elem::from(rng.gen_range(0..n)) }).collect();
    lat.elements()
        .map(|x| lat.poset().down_set(x).iter().fold(lat.bottom(), |acc, y| lat.join(acc, raw[y.index()])))
        .collect()
}

/// An instance `(S, sub, start)` satisfying the hypotheses of the greatest
/// fixed point theorem.
///
/// `sub(v) = ⋃_{x <= v} ({m(x)} ∪ (m(x)↓ ∩ R_x))` for a monotone `m` and random
/// `R_x`, so it is permanent upward with greatest element `m(v)`; `S(v)`
/// holds `m(v)` plus a random part of `sub(v)`.
pub fn random_gfp_instance<R: Rng>(rng: &mut R, lat: &FiniteLattice) -> (Multifunction, Multifunction, Elem) {
    let p = lat.poset();
    let n = lat.len();
    let m = random_monotone_map(rng, lat, 0.4);
    let local: Vec<ElemSet> = lat
        .elements()
        .map(|x| {
            let mut r = p.down_set(m[x.index()]).intersection(&random_subset(rng, n, 0.4));
            r.insert(m[x.index()]);
            r
        })
        .collect();
    let sub: Vec<ElemSet> = lat
        .elements()
        .map(|v| p.down_set(v).iter().fold(ElemSet::new(), |acc, x| acc.union(&local[x.index()])))
        .collect();
    let s: Vec<ElemSet> = lat
        .elements()
        .map(|v| {
            let mut val = sub[v.index()].intersection(&random_subset(rng, n, 0.5));
            val.insert(m[v.index()]);
            val
        })
        .collect();
    let candidates: Vec<Elem> = lat.elements().filter(|&x| p.leq(x, m[x.index()])).collect();
    let start = *candidates.choose(rng).expect("the bottom is always a candidate");
    (Multifunction::on(p.clone(), s).expect("carrier"), Multifunction::on(p.clone(), sub).expect("carrier"), start)
}

/// Order dual of [`random_gfp_instance`], for the smallest fixed point.
pub fn random_lfp_instance<R: Rng>(rng: &mut R, lat: &FiniteLattice) -> (Multifunction, Multifunction, Elem) {
    let dual = lat.dual();
    let (s, sup, start) = random_gfp_instance(rng, &dual);
    (s.dual(), sup.dual(), start)
}

/// Random finite inclusion: two functional families (a `u`-only part and a
/// `(u,v)` part) over a small pool, random admissible sets that mostly
/// contain `u`, and test sets drawn from `u↓` plus a few extra points.
pub fn random_qvip<R: Rng>(rng: &mut R, lat: &FiniteLattice) -> QvipInstance {
    let n = lat.len();
    let p = lat.poset();
    let pool: Vec<ExtendedFunctional> =
        (0..rng.gen_range(3..7)).map(|_| random_functional(rng, n, &[-1, 0, 1, 2, 3], 0.25)).collect();
    let ids: Vec<usize> = (0..pool.len()).collect();
    let by_u: Vec<Vec<usize>> = (0..n).map(|_| vec![*ids.choose(rng).unwrap()]).collect();
    let mut e_part = Vec::with_capacity(n * n);
    let mut f_part = Vec::with_capacity(n * n);
    let mut admissible = Vec::with_capacity(n * n);
    let mut tests = Vec::with_capacity(n * n);
    for u in lat.elements() {
        for _v in lat.elements() {
            e_part.push(by_u[u.index()].clone());
            let k = rng.gen_range(1..=2);
            f_part.push(ids.choose_multiple(rng, k).copied().collect());
            let mut adm = random_subset(rng, n, 0.5);
            if rng.gen_bool(0.8) {
                adm.insert(u);
            }
            admissible.push(adm);
            let t = p.down_set(u).intersection(&random_subset(rng, n, 0.7)).union(&random_subset(rng, n, 0.15));
            tests.push(t);
        }
    }
    QvipInstance::new(lat.clone(), pool, vec![e_part, f_part], admissible, tests).expect("consistent tables")
}

/// A pair of instances and parameters `v <= v2` satisfying the hypotheses of
/// the monotone dependence lemma at every `u`.
pub fn random_dependence_pair<R: Rng>(rng: &mut R, lat: &FiniteLattice) -> (QvipInstance, QvipInstance, Elem, Elem) {
    let n = lat.len();
    let p = lat.poset();
    let inst = random_qvip(rng, lat);
    let v = Elem::from(rng.gen_range(0..n));
    let v2 = *p.up_set(v).iter().collect::<Vec<_>>().choose(rng).expect("v <= v");
    let top = ExtendedFunctional::indicator(n, &ElemSet::singleton(lat.top())).expect("top");

    let mut pool: Vec<ExtendedFunctional> = Vec::new();
    let mut family = Vec::with_capacity(n * n);
    let mut admissible = Vec::with_capacity(n * n);
    let mut tests = Vec::with_capacity(n * n);
    let intern = |pool: &mut Vec<ExtendedFunctional>, f: ExtendedFunctional| {
        pool.iter().position(|g| *g == f).unwrap_or_else(|| {
            pool.push(f);
            pool.len() - 1
        })
    };
    for u in lat.elements() {
        for w in lat.elements() {
            if w != v2 {
                let ids = inst.functionals(u, w).into_iter().map(|f| intern(&mut pool, f)).collect();
                family.push(ids);
                admissible.push(inst.admissible(u, w).clone());
                tests.push(inst.tests(u, w).clone());
                continue;
            }
            let mut ids: Vec<usize> = Vec::new();
            for a in inst.functionals(u, v) {
                let partner = partner_above(rng, lat, &a).unwrap_or_else(|| top.clone());
                ids.push(intern(&mut pool, partner));
            }
            if rng.gen_bool(0.3) {
                let extra = random_functional(rng, n, &[0, 1, 2], 0.3);
                ids.push(intern(&mut pool, extra));
            }
            ids.sort_unstable();
            ids.dedup();
            family.push(ids);
            admissible.push(inst.admissible(u, v).union(&random_subset(rng, n, 0.2)));
            let shrink = inst.tests(u, v).intersection(p.down_set(u)).intersection(&random_subset(rng, n, 0.8));
            tests.push(shrink);
        }
    }
    let inst2 = QvipInstance::new(lat.clone(), pool, vec![family], admissible, tests).expect("consistent tables");
    (inst, inst2, v, v2)
}

/// Some `b` with `a ≼ b`: `a` plus an antitone shift when `a` is submodular,
/// otherwise a random draw that passes the check.
fn partner_above<R: Rng>(rng: &mut R, lat: &FiniteLattice, a: &ExtendedFunctional) -> Option<ExtendedFunctional> {
    if rng.gen_bool(0.7) && is_submodular(a, lat).expect("carrier") {
        for _ in 0..4 {
            let g = random_antitone(rng, lat, &[-1, 0, 1, 2], 0.2);
            if let Some(b) = add_values(a, &g) {
                return Some(b);
            }
        }
    }
    (0..6)
        .map(|_| random_functional(rng, lat.len(), &[-1, 0, 1, 2, 3], 0.3))
        .find(|b| precsim(a, b, lat).expect("carrier"))
}

/// Random instance with a submodular parameter functional per `v`, full
/// admissible and test sets, and a declared universe containing every `K_v`.
pub fn random_qvip_with_parameter<R: Rng>(rng: &mut R, lat: &FiniteLattice) -> QvipInstance {
    let n = lat.len();
    let base = random_qvip(rng, lat);
    let mut pool = base.pool().to_vec();
    let mut distinguished = Vec::with_capacity(n);
    for _ in 0..n {
        pool.push(random_submodular(rng, lat));
        distinguished.push(pool.len() - 1);
    }
    let mut universe = crate::qvip::value_universe(n, &[0, 1]);
    for &id in &distinguished {
        if !universe.contains(&pool[id]) {
            universe.push(pool[id].clone());
        }
    }
    QvipInstance::unconstrained(lat.clone(), pool, base.families().to_vec())
        .expect("consistent tables")
        .with_parameter_functionals(distinguished)
        .expect("ids in pool")
        .with_universe(universe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::{is_increasing_upward, is_permanent_upward};
    use crate::order::lattice_catalog;

    #[test]
    fn generators_meet_their_contracts() {
        let mut r = rng(11);
        for lat in lattice_catalog(5) {
            for _ in 0..20 {
                assert!(is_submodular(&random_submodular(&mut r, &lat), &lat).unwrap());
                let (a, b, c) = random_transitivity_triple(&mut r, &lat);
                assert!(precsim(&a, &b, &lat).unwrap() && precsim(&b, &b, &lat).unwrap());
                assert!(precsim(&b, &c, &lat).unwrap());
                assert!(is_increasing_upward(&random_increasing_upward(&mut r, &lat, 0.1)));
                let (_, sub, _) = random_gfp_instance(&mut r, &lat);
                assert!(is_permanent_upward(&sub));
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let lat = FiniteLattice::m3();
        let a = random_qvip(&mut rng(3), &lat);
        let b = random_qvip(&mut rng(3), &lat);
        assert_eq!(a, b);
    }
}
