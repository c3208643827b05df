//! Parameterised quasi-variational inclusions on finite lattices.
//!
//! For a parameter `v`, `u` solves the inclusion when `u ∈ K(u,v)` and some
//! `a ∈ A(u,v)` satisfies `a(w) >= a(u)` for every test point `w ∈ T(u,v)`.

mod fixture;

pub use fixture::{QvipEntry, QvipFixture};

use std::io::Write;

use thiserror::Error;

use crate::fixpoint::{FixpointError, Multifunction};
use crate::order::{precsim, Elem, ElemSet, ExtValue, ExtendedFunctional, FiniteLattice, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QvipError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
    #[error("no functional universe declared for the parameter-part expansion")]
    UniverseNotDeclared,
    #[error("instance has no distinguished parameter functional per parameter")]
    NoParameterPart,
    #[error("table {table} has {got} entries, expected {expected}")]
    TableSize { table: &'static str, expected: usize, got: usize },
    #[error("functional id {0} is not in the pool")]
    UnknownFunctional(usize),
    #[error("instances live on different lattices")]
    LatticeMismatch,
    #[error("hypothesis {clause} fails at u = {u}: {detail}")]
    Hypothesis { clause: &'static str, u: String, detail: String },
}

/// The parameter-dependent summand of `A`: a distinguished functional `K_v`
/// per parameter and the family actually added to `A(·, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterPart {
    pub distinguished: Vec<usize>,
    pub family: Vec<Vec<usize>>,
}

/// A finite instance. Parameters range over the lattice carrier itself.
///
/// `A(u,v)` is the Minkowski sum of the `families` tables (indexed by
/// `u * n + v`) and, if present, the parameter part at `v`. Sums that are
/// `+inf` everywhere are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QvipInstance {
    lattice: FiniteLattice,
    pool: Vec<ExtendedFunctional>,
    families: Vec<Vec<Vec<usize>>>,
    parameter_part: Option<ParameterPart>,
    admissible: Vec<ElemSet>,
    tests: Vec<ElemSet>,
    universe: Option<Vec<ExtendedFunctional>>,
}

/// Solutions of the inclusion at one parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub parameter: Elem,
    pub solutions: ElemSet,
    /// Per solution (in id order): index into `A(u,v)` and the functional.
    pub certificates: Vec<(Elem, usize, ExtendedFunctional)>,
}

impl QvipInstance {
    pub fn new(
        lattice: FiniteLattice,
        pool: Vec<ExtendedFunctional>,
        families: Vec<Vec<Vec<usize>>>,
        admissible: Vec<ElemSet>,
        tests: Vec<ElemSet>,
    ) -> Result<Self, QvipError> {
        let n = lattice.len();
        for f in &pool {
            if f.len() != n {
                return Err(OrderError::DimensionMismatch { left: f.len(), right: n }.into());
            }
        }
        for fam in &families {
            check_len("families", fam.len(), n * n)?;
            for &id in fam.iter().flatten() {
                if id >= pool.len() {
                    return Err(QvipError::UnknownFunctional(id));
                }
            }
        }
        check_len("admissible", admissible.len(), n * n)?;
        check_len("tests", tests.len(), n * n)?;
        for s in admissible.iter().chain(&tests) {
            lattice.poset().check_set(s)?;
        }
        Ok(QvipInstance { lattice, pool, families, parameter_part: None, admissible, tests, universe: None })
    }

    /// Instance with `K(u,v) = T(u,v) =` whole carrier.
    pub fn unconstrained(
        lattice: FiniteLattice,
        pool: Vec<ExtendedFunctional>,
        families: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, QvipError> {
        let n = lattice.len();
        let full = vec![lattice.poset().carrier(); n * n];
        Self::new(lattice, pool, families, full.clone(), full)
    }

    /// Adds the parameter part: `K_v` is `pool[distinguished[v]]` and is
    /// itself the summand added to `A(·, v)`.
    pub fn with_parameter_functionals(mut self, distinguished: Vec<usize>) -> Result<Self, QvipError> {
        check_len("parameter functionals", distinguished.len(), self.lattice.len())?;
        if let Some(&bad) = distinguished.iter().find(|&&id| id >= self.pool.len()) {
            return Err(QvipError::UnknownFunctional(bad));
        }
        let family = distinguished.iter().map(|&id| vec![id]).collect();
        self.parameter_part = Some(ParameterPart { distinguished, family });
        Ok(self)
    }

    pub fn with_universe(mut self, universe: Vec<ExtendedFunctional>) -> Self {
        self.universe = Some(universe);
        self
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn pool(&self) -> &[ExtendedFunctional] {
        &self.pool
    }

    pub fn families(&self) -> &[Vec<Vec<usize>>] {
        &self.families
    }

    pub fn parameter_part(&self) -> Option<&ParameterPart> {
        self.parameter_part.as_ref()
    }

    pub fn universe(&self) -> Option<&[ExtendedFunctional]> {
        self.universe.as_deref()
    }

    fn idx(&self, u: Elem, v: Elem) -> usize {
        u.index() * self.len() + v.index()
    }

    pub fn admissible(&self, u: Elem, v: Elem) -> &ElemSet {
        &self.admissible[self.idx(u, v)]
    }

    pub fn tests(&self, u: Elem, v: Elem) -> &ElemSet {
        &self.tests[self.idx(u, v)]
    }

    /// `K_v` when a parameter part is present.
    pub fn parameter_functional(&self, v: Elem) -> Option<&ExtendedFunctional> {
        self.parameter_part.as_ref().map(|p| &self.pool[p.distinguished[v.index()]])
    }

    /// The functional set `A(u,v)` in a deterministic order.
    pub fn functionals(&self, u: Elem, v: Elem) -> Vec<ExtendedFunctional> {
        let k = self.idx(u, v);
        let mut summands: Vec<&[usize]> = self.families.iter().map(|f| f[k].as_slice()).collect();
        if let Some(p) = &self.parameter_part {
            summands.push(&p.family[v.index()]);
        }
        let mut acc = vec![ExtendedFunctional::zero(self.len())];
        for ids in summands {
            let mut next = Vec::with_capacity(acc.len() * ids.len());
            for a in &acc {
                for &id in ids {
                    if let Some(sum) = a.checked_add(&self.pool[id]) {
                        if !next.contains(&sum) {
                            next.push(sum);
                        }
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// Replaces the parameter part by `K_v↓ = { k ∈ universe : k ≼ K_v }` and
    /// the test sets by `u ∧ D(K_v)`.
    pub fn build_sub_operator(&self) -> Result<QvipInstance, QvipError> {
        self.expand(true)
    }

    /// Replaces the parameter part by `K_v↑ = { k ∈ universe : K_v ≼ k }` and
    /// the test sets by `u ∨ D(K_v)`.
    pub fn build_super_operator(&self) -> Result<QvipInstance, QvipError> {
        self.expand(false)
    }

    fn expand(&self, lower: bool) -> Result<QvipInstance, QvipError> {
        let part = self.parameter_part.as_ref().ok_or(QvipError::NoParameterPart)?;
        let universe = self.universe.as_ref().ok_or(QvipError::UniverseNotDeclared)?;
        let n = self.len();
        let mut pool = self.pool.clone();
        let mut family = Vec::with_capacity(n);
        let mut tests = Vec::with_capacity(n * n);
        for v in self.lattice.elements() {
            let kv = &self.pool[part.distinguished[v.index()]];
            let mut ids = Vec::new();
            for k in universe {
                let keep = if lower { precsim(k, kv, &self.lattice)? } else { precsim(kv, k, &self.lattice)? };
                if keep {
                    ids.push(intern(&mut pool, k));
                }
            }
            family.push(ids);
        }
        for u in self.lattice.elements() {
            for v in self.lattice.elements() {
                let dom = self.pool[part.distinguished[v.index()]].effective_domain();
                tests.push(if lower {
                    self.lattice.meet_with_set(u, &dom)
                } else {
                    self.lattice.join_with_set(u, &dom)
                });
            }
        }
        Ok(QvipInstance {
            lattice: self.lattice.clone(),
            pool,
            families: self.families.clone(),
            parameter_part: Some(ParameterPart { distinguished: part.distinguished.clone(), family }),
            admissible: self.admissible.clone(),
            tests,
            universe: self.universe.clone(),
        })
    }
}

fn check_len(table: &'static str, got: usize, expected: usize) -> Result<(), QvipError> {
    if got == expected {
        Ok(())
    } else {
        Err(QvipError::TableSize { table, expected, got })
    }
}

fn intern(pool: &mut Vec<ExtendedFunctional>, f: &ExtendedFunctional) -> usize {
    match pool.iter().position(|g| g == f) {
        Some(i) => i,
        None => {
            pool.push(f.clone());
            pool.len() - 1
        }
    }
}

/// Whether `a` certifies `u` against the test set: `a(u)` finite and
/// `a(w) >= a(u)` for all `w ∈ tests`.
pub fn certifies(a: &ExtendedFunctional, u: Elem, tests: &ElemSet) -> bool {
    let au = a.at(u);
    au.is_finite() && tests.iter().all(|w| a.at(w) >= au)
}

/// All functionals with values in `values ∪ {+inf}` that are finite
/// somewhere. `values.len() + 1` to the power `n` candidates.
pub fn value_universe(n: usize, values: &[i64]) -> Vec<ExtendedFunctional> {
    let base = values.len() + 1;
    let total = base.checked_pow(n as u32).expect("universe too large");
    assert!(total <= 1 << 16, "universe too large");
    (0..total)
        .filter_map(|mut code| {
            let vals = (0..n)
                .map(|_| {
                    let digit = code % base;
                    code /= base;
                    if digit == values.len() {
                        ExtValue::Infinite
                    } else {
                        ExtValue::int(values[digit])
                    }
                })
                .collect();
            ExtendedFunctional::new(vals).ok()
        })
        .collect()
}

pub fn solve_parameterized(inst: &QvipInstance, v: Elem) -> SolutionSet {
    let mut solutions = ElemSet::new();
    let mut certificates = Vec::new();
    for u in inst.lattice.elements() {
        if !inst.admissible(u, v).contains(u) {
            continue;
        }
        let tests = inst.tests(u, v);
        if let Some((i, a)) = inst.functionals(u, v).into_iter().enumerate().find(|(_, a)| certifies(a, u, tests)) {
            solutions.insert(u);
            certificates.push((u, i, a));
        }
    }
    SolutionSet { parameter: v, solutions, certificates }
}

pub fn solution_operator(inst: &QvipInstance) -> Multifunction {
    let values = inst.lattice.elements().map(|v| solve_parameterized(inst, v).solutions).collect();
    Multifunction::on(inst.lattice.poset().clone(), values).expect("solutions lie in the carrier")
}

/// `A ≼* B`: every `a ∈ A` has some `b ∈ B` with `a ≼ b`.
pub fn precsim_star(
    a: &[ExtendedFunctional],
    b: &[ExtendedFunctional],
    lattice: &FiniteLattice,
) -> Result<bool, OrderError> {
    for x in a {
        let mut found = false;
        for y in b {
            if precsim(x, y, lattice)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the monotone-dependence hypotheses for `v <= v2` at every
/// `u ∈ S(v)` and then asserts `S(v) ⊆ S'(v2)`.
pub fn check_dependence(inst: &QvipInstance, inst2: &QvipInstance, v: Elem, v2: Elem) -> Result<bool, QvipError> {
    if inst.lattice != inst2.lattice {
        return Err(QvipError::LatticeMismatch);
    }
    let lat = &inst.lattice;
    let p = lat.poset();
    p.check_elem(v)?;
    p.check_elem(v2)?;
    if !p.leq(v, v2) {
        return Err(QvipError::Hypothesis {
            clause: "v <= v'",
            u: "-".into(),
            detail: format!("{} is not below {}", p.label(v), p.label(v2)),
        });
    }
    let sol = solve_parameterized(inst, v).solutions;
    for u in sol.iter() {
        let fail = |clause, detail: String| QvipError::Hypothesis { clause, u: p.label(u).to_string(), detail };
        if !precsim_star(&inst.functionals(u, v), &inst2.functionals(u, v2), lat)? {
            return Err(fail("A(u,v) ≼* A'(u,v')", "some functional has no ≼-upper partner".into()));
        }
        if let Some(k) = inst.admissible(u, v).difference(inst2.admissible(u, v2)).first() {
            return Err(fail("K(u,v) ⊆ K'(u,v')", format!("{} missing", p.label(k))));
        }
        if let Some(t) = inst2.tests(u, v2).difference(inst.tests(u, v)).first() {
            return Err(fail("T'(u,v') ⊆ T(u,v)", format!("{} missing", p.label(t))));
        }
        if let Some(t) = inst2.tests(u, v2).iter().find(|&t| !p.leq(t, u)) {
            return Err(fail("T'(u,v') ≤* u", format!("{} is not below u", p.label(t))));
        }
    }
    Ok(sol.is_subset(&solve_parameterized(inst2, v2).solutions))
}

/// Solutions `u ∈ S(v)` whose certificate has `≼`-partners in `A'(u,v2)`,
/// none of them finite at `u`. The inclusion `S(v) ⊆ S'(v2)` can fail
/// exactly at such points even when every hypothesis of
/// [`check_dependence`] holds.
pub fn partner_domain_gaps(inst: &QvipInstance, inst2: &QvipInstance, v: Elem, v2: Elem) -> Result<ElemSet, QvipError> {
    if inst.lattice != inst2.lattice {
        return Err(QvipError::LatticeMismatch);
    }
    let lat = &inst.lattice;
    let mut out = ElemSet::new();
    for (u, _, a) in solve_parameterized(inst, v).certificates {
        let mut finite_partner = false;
        for b in inst2.functionals(u, v2) {
            if b.at(u).is_finite() && precsim(&a, &b, lat)? {
                finite_partner = true;
                break;
            }
        }
        if !finite_partner {
            out.insert(u);
        }
    }
    Ok(out)
}

impl SolutionSet {
    /// CSV rows `v,u,certificate` (header included).
    pub fn write_csv<W: Write>(sets: &[SolutionSet], lattice: &FiniteLattice, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["v", "u", "certificate"])?;
        let p = lattice.poset();
        for s in sets {
            for (u, idx, _) in &s.certificates {
                w.write_record([p.label(s.parameter), p.label(*u), &idx.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::fixed_points;

    fn chain_value(n: usize) -> ExtendedFunctional {
        ExtendedFunctional::new((0..n as i64).map(ExtValue::int).collect()).unwrap()
    }

    fn single_family(lat: &FiniteLattice, pool: Vec<ExtendedFunctional>, id: usize) -> QvipInstance {
        let n = lat.len();
        QvipInstance::unconstrained(lat.clone(), pool, vec![vec![vec![id]; n * n]]).unwrap()
    }

    #[test]
    fn zero_functional_admits_everything() {
        let lat = FiniteLattice::square();
        let inst = single_family(&lat, vec![ExtendedFunctional::zero(4)], 0);
        for v in lat.elements() {
            assert_eq!(solve_parameterized(&inst, v).solutions, lat.poset().carrier());
        }
    }

    #[test]
    fn increasing_functional_on_chain_forces_bottom() {
        let lat = FiniteLattice::chain(3);
        let inst = single_family(&lat, vec![chain_value(3)], 0);
        let s = solve_parameterized(&inst, Elem(1));
        assert_eq!(s.solutions, ElemSet::singleton(Elem(0)));
        assert_eq!(s.certificates[0].1, 0);
    }

    #[test]
    fn empty_admissible_set_has_no_solutions() {
        let lat = FiniteLattice::chain(3);
        let inst = QvipInstance::new(
            lat.clone(),
            vec![ExtendedFunctional::zero(3)],
            vec![vec![vec![0]; 9]],
            vec![ElemSet::new(); 9],
            vec![lat.poset().carrier(); 9],
        )
        .unwrap();
        assert!(solve_parameterized(&inst, Elem(0)).solutions.is_empty());
    }

    #[test]
    fn fixed_points_are_inclusion_solutions() {
        let lat = FiniteLattice::chain(3);
        // A(u,v) depends on u: u is a solution of the u-problem only at u = 2
        let pool = vec![chain_value(3), ExtendedFunctional::zero(3)];
        let fam = (0..9).map(|k| vec![if k / 3 == 2 { 1 } else { 0 }]).collect();
        let inst = QvipInstance::unconstrained(lat.clone(), pool, vec![fam]).unwrap();
        let s = solution_operator(&inst);
        let direct: ElemSet = lat.elements().filter(|&u| solve_parameterized(&inst, u).solutions.contains(u)).collect();
        assert_eq!(fixed_points(&s), direct);
        assert_eq!(direct, [Elem(0), Elem(2)].into_iter().collect());
    }

    #[test]
    fn minkowski_sum_drops_empty_domains() {
        let lat = FiniteLattice::chain(2);
        let lo = ExtendedFunctional::from_ints(&[Some(0), None]).unwrap();
        let hi = ExtendedFunctional::from_ints(&[None, Some(0)]).unwrap();
        let inst = QvipInstance::unconstrained(lat, vec![lo.clone(), hi], vec![vec![vec![0]; 4], vec![vec![0, 1]; 4]])
            .unwrap();
        assert_eq!(inst.functionals(Elem(0), Elem(0)), vec![lo]);
    }

    #[test]
    fn sub_operator_on_chain() {
        let lat = FiniteLattice::chain(3);
        let zero = ExtendedFunctional::zero(3);
        let inst = single_family(&lat, vec![zero.clone()], 0).with_parameter_functionals(vec![0; 3]).unwrap();
        assert_eq!(inst.build_sub_operator(), Err(QvipError::UniverseNotDeclared));
        let sub = inst.clone().with_universe(vec![zero.clone()]).build_sub_operator().unwrap();
        assert_eq!(sub.parameter_part().unwrap().family, vec![vec![0]; 3]);
        for u in lat.elements() {
            assert_eq!(sub.tests(u, Elem(0)), lat.poset().down_set(u));
        }
        let sup = inst.with_universe(vec![zero]).build_super_operator().unwrap();
        assert_eq!(sup.tests(Elem(1), Elem(0)), lat.poset().up_set(Elem(1)));
    }

    #[test]
    fn singleton_domain_gives_singleton_tests() {
        let lat = FiniteLattice::square();
        let only = ExtendedFunctional::indicator(4, &ElemSet::singleton(Elem(2))).unwrap();
        let inst = single_family(&lat, vec![ExtendedFunctional::zero(4), only.clone()], 0)
            .with_parameter_functionals(vec![1; 4])
            .unwrap()
            .with_universe(vec![only]);
        let sub = inst.build_sub_operator().unwrap();
        assert_eq!(sub.tests(Elem(2), Elem(0)), &ElemSet::singleton(Elem(2)));
    }

    #[test]
    fn dependence_reflexive_and_broken() {
        let lat = FiniteLattice::chain(3);
        let p = lat.poset();
        let pool = vec![ExtendedFunctional::zero(3)];
        let down: Vec<ElemSet> = (0..9).map(|k| p.down_set(Elem::from(k / 3)).clone()).collect();
        let full = vec![p.carrier(); 9];
        let inst =
            QvipInstance::new(lat.clone(), pool.clone(), vec![vec![vec![0]; 9]], full.clone(), down.clone()).unwrap();
        for v in lat.elements() {
            assert!(check_dependence(&inst, &inst, v, v).unwrap());
        }
        // tests of the second instance escape those of the first
        let narrow: Vec<ElemSet> = (0..9).map(|_| ElemSet::singleton(Elem(0))).collect();
        let a = QvipInstance::new(lat.clone(), pool.clone(), vec![vec![vec![0]; 9]], full.clone(), narrow).unwrap();
        let err = check_dependence(&a, &inst, Elem(0), Elem(1)).unwrap_err();
        assert!(matches!(err, QvipError::Hypothesis { clause: "T'(u,v') ⊆ T(u,v)", .. }));
        assert!(check_dependence(&inst, &inst, Elem(2), Elem(1)).is_err());
    }

    #[test]
    fn dependence_fails_when_partner_is_infinite_at_u() {
        // A = {0}, A' = {indicator of the top}: 0 ≼ indicator, all clauses hold
        let lat = FiniteLattice::chain(2);
        let p = lat.poset();
        let top = ExtendedFunctional::indicator(2, &ElemSet::singleton(Elem(1))).unwrap();
        let full = vec![p.carrier(); 4];
        let down: Vec<ElemSet> = (0..4).map(|k| p.down_set(Elem::from(k / 2)).clone()).collect();
        let a = QvipInstance::new(
            lat.clone(),
            vec![ExtendedFunctional::zero(2)],
            vec![vec![vec![0]; 4]],
            full.clone(),
            down.clone(),
        )
        .unwrap();
        let b = QvipInstance::new(lat.clone(), vec![top], vec![vec![vec![0]; 4]], full, down).unwrap();
        assert_eq!(check_dependence(&a, &b, Elem(0), Elem(0)), Ok(false));
        assert_eq!(partner_domain_gaps(&a, &b, Elem(0), Elem(0)).unwrap(), ElemSet::singleton(Elem(0)));
        assert!(partner_domain_gaps(&a, &a, Elem(0), Elem(0)).unwrap().is_empty());
    }

    #[test]
    fn universe_enumeration() {
        let u = value_universe(2, &[0, 1]);
        assert_eq!(u.len(), 8);
        assert!(u.iter().all(|f| !f.effective_domain().is_empty()));
    }

    #[test]
    fn solution_csv() {
        let lat = FiniteLattice::chain(2);
        let inst = single_family(&lat, vec![ExtendedFunctional::zero(2)], 0);
        let sets: Vec<_> = lat.elements().map(|v| solve_parameterized(&inst, v)).collect();
        let mut buf = Vec::new();
        SolutionSet::write_csv(&sets, &lat, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "v,u,certificate\n0,0,0\n0,1,0\n1,0,0\n1,1,0\n");
    }
}
