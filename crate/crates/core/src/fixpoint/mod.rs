//! Subpoints, fixed points and extremal fixed points of multifunctions on
//! finite posets.

mod theorem;

pub use theorem::{greatest_fixed_point_theorem, smallest_fixed_point_theorem, ExtremalFixpoint};

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{star_leq, Elem, ElemSet, FinitePoset, LatticeFixture, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixpointError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("value at {at} contains {elem}, which is outside the codomain")]
    OutsideCodomain { at: String, elem: String },
    #[error("expected {expected} value sets, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("hypothesis {clause} fails: {witness}")]
    Hypothesis { clause: &'static str, witness: String },
    #[error("multifunction is not increasing upward: {0} <= {1} but the values are not <=*-related")]
    NotIncreasingUpward(String, String),
}

/// A map from the elements of a finite poset to subsets of a codomain
/// `W ⊆ carrier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multifunction {
    domain: FinitePoset,
    codomain: ElemSet,
    values: Vec<ElemSet>,
}

impl Multifunction {
    pub fn new(domain: FinitePoset, codomain: ElemSet, values: Vec<ElemSet>) -> Result<Self, FixpointError> {
        if values.len() != domain.len() {
            return Err(FixpointError::WrongArity { expected: domain.len(), got: values.len() });
        }
        domain.check_set(&codomain)?;
        for (i, val) in values.iter().enumerate() {
            if let Some(bad) = val.difference(&codomain).first() {
                return Err(FixpointError::OutsideCodomain {
                    at: domain.label(Elem::from(i)).to_string(),
                    elem: bad.to_string(),
                });
            }
        }
        Ok(Multifunction { domain, codomain, values })
    }

    /// Multifunction whose codomain is the whole carrier.
    pub fn on(domain: FinitePoset, values: Vec<ElemSet>) -> Result<Self, FixpointError> {
        let codomain = domain.carrier();
        Self::new(domain, codomain, values)
    }

    pub fn from_fn(domain: &FinitePoset, f: impl Fn(Elem) -> ElemSet) -> Result<Self, FixpointError> {
        let values = domain.elements().map(f).collect();
        Self::on(domain.clone(), values)
    }

    pub fn identity(domain: &FinitePoset) -> Self {
        Self::from_fn(domain, ElemSet::singleton).expect("singletons stay in the carrier")
    }

    pub fn constant(domain: &FinitePoset, value: &ElemSet) -> Result<Self, FixpointError> {
        Self::from_fn(domain, |_| value.clone())
    }

    pub fn domain(&self) -> &FinitePoset {
        &self.domain
    }

    pub fn codomain(&self) -> &ElemSet {
        &self.codomain
    }

    pub fn value(&self, v: Elem) -> &ElemSet {
        &self.values[v.index()]
    }

    pub fn values(&self) -> &[ElemSet] {
        &self.values
    }

    /// Same values over the order-dual domain.
    pub fn dual(&self) -> Self {
        Multifunction { domain: self.domain.dual(), codomain: self.codomain.clone(), values: self.values.clone() }
    }
}

/// `{ v ∈ W : v ≤* S(v) }`.
pub fn subpoints(s: &Multifunction) -> ElemSet {
    s.codomain.iter().filter(|&v| s.domain.up_set(v).intersects(s.value(v))).collect()
}

/// `{ v ∈ W : v ∈ S(v) }`.
pub fn fixed_points(s: &Multifunction) -> ElemSet {
    s.codomain.iter().filter(|&v| s.value(v).contains(v)).collect()
}

pub fn maximal_elements(x: &ElemSet, poset: &FinitePoset) -> ElemSet {
    x.iter().filter(|&a| !x.iter().any(|b| poset.lt(a, b))).collect()
}

pub fn minimal_elements(x: &ElemSet, poset: &FinitePoset) -> ElemSet {
    x.iter().filter(|&a| !x.iter().any(|b| poset.lt(b, a))).collect()
}

pub fn greatest_element(x: &ElemSet, poset: &FinitePoset) -> Option<Elem> {
    x.iter().find(|&g| x.is_subset(poset.down_set(g)))
}

pub fn smallest_element(x: &ElemSet, poset: &FinitePoset) -> Option<Elem> {
    x.iter().find(|&g| x.is_subset(poset.up_set(g)))
}

/// First comparable pair `v <= w` with `S(v) ≤* S(w)` failing.
pub fn increasing_upward_witness(s: &Multifunction) -> Option<(Elem, Elem)> {
    let p = &s.domain;
    p.elements()
        .flat_map(|v| p.up_set(v).iter().map(move |w| (v, w)).collect::<Vec<_>>())
        .find(|&(v, w)| !star_leq(s.value(v), s.value(w), p).expect("values lie in the carrier"))
}

pub fn is_increasing_upward(s: &Multifunction) -> bool {
    increasing_upward_witness(s).is_none()
}

/// First comparable pair `a <= b` with `S(a) ⊆ S(b)` failing.
pub fn permanent_upward_witness(s: &Multifunction) -> Option<(Elem, Elem)> {
    let p = &s.domain;
    p.elements()
        .flat_map(|a| p.up_set(a).iter().map(move |b| (a, b)).collect::<Vec<_>>())
        .find(|&(a, b)| !s.value(a).is_subset(s.value(b)))
}

pub fn is_permanent_upward(s: &Multifunction) -> bool {
    permanent_upward_witness(s).is_none()
}

/// A pair of `x` without a common upper bound inside `x`.
pub fn directed_upward_witness(x: &ElemSet, poset: &FinitePoset) -> Option<(Elem, Elem)> {
    for a in x.iter() {
        for b in x.iter().filter(|&b| b > a) {
            let common = poset.up_set(a).intersection(poset.up_set(b));
            if !common.intersects(x) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_directed_upward(x: &ElemSet, poset: &FinitePoset) -> bool {
    directed_upward_witness(x, poset).is_none()
}

pub fn is_directed_downward(x: &ElemSet, poset: &FinitePoset) -> bool {
    directed_upward_witness(x, &poset.dual()).is_none()
}

/// A maximal subpoint that is not a maximal fixed point, if any.
///
/// Requires `S` to be increasing upward; a returned witness therefore points
/// to a bug in this crate rather than to a property of the input.
pub fn prop_meta_violation(s: &Multifunction) -> Result<Option<Elem>, FixpointError> {
    if let Some((v, w)) = increasing_upward_witness(s) {
        return Err(FixpointError::NotIncreasingUpward(s.domain.label(v).to_string(), s.domain.label(w).to_string()));
    }
    let max_fix = maximal_elements(&fixed_points(s), &s.domain);
    Ok(maximal_elements(&subpoints(s), &s.domain).iter().find(|&v| !max_fix.contains(v)))
}

/// Every maximal subpoint of an increasing-upward `S` is a maximal fixed point.
pub fn check_prop_meta(s: &Multifunction) -> Result<bool, FixpointError> {
    Ok(prop_meta_violation(s)?.is_none())
}

/// Whether every chain of `x` (including the empty one) has an upper bound
/// in `x`. Exhaustive over subsets, so `x` must be small.
pub fn is_inductive(x: &ElemSet, poset: &FinitePoset) -> bool {
    let members: Vec<Elem> = x.iter().collect();
    assert!(members.len() <= 20, "chain enumeration limited to 20 elements");
    (0u64..(1u64 << members.len())).all(|mask| {
        let chain: ElemSet = members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        !poset.is_chain(&chain) || poset.upper_bounds_in(&chain, x).intersects(x)
    })
}

/// Summary of the subpoint and fixed-point structure of a multifunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointReport {
    pub subpoints: ElemSet,
    pub fixed_points: ElemSet,
    pub maximal_fixed_points: ElemSet,
    pub greatest_fixed_point: Option<Elem>,
    /// Witness `b ∈ S(v)` with `v <= b` per subpoint `v`, in id order.
    pub certificate: Vec<(Elem, Elem)>,
}

impl FixpointReport {
    pub fn build(s: &Multifunction) -> Self {
        let subs = subpoints(s);
        let fix = fixed_points(s);
        let certificate = subs
            .iter()
            .map(|v| {
                let b = s.domain.up_set(v).intersection(s.value(v)).first().expect("subpoint has a witness");
                (v, b)
            })
            .collect();
        FixpointReport {
            maximal_fixed_points: maximal_elements(&fix, &s.domain),
            greatest_fixed_point: greatest_element(&fix, &s.domain),
            subpoints: subs,
            fixed_points: fix,
            certificate,
        }
    }

    /// CSV with columns `element,is_subpoint,is_fixed_point`.
    pub fn write_csv<W: Write>(&self, poset: &FinitePoset, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["element", "is_subpoint", "is_fixed_point"])?;
        for e in poset.elements() {
            w.write_record([
                poset.label(e),
                if self.subpoints.contains(e) { "1" } else { "0" },
                if self.fixed_points.contains(e) { "1" } else { "0" },
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// On-disk multifunction: a poset fixture, an optional codomain and value
/// lists keyed by element label. Missing labels map to the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultifunctionFixture {
    pub poset: LatticeFixture,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<Vec<String>>,
    pub values: BTreeMap<String, Vec<String>>,
}

impl MultifunctionFixture {
    pub fn from_multifunction(s: &Multifunction) -> Self {
        let p = &s.domain;
        let names = |set: &ElemSet| set.iter().map(|e| p.label(e).to_string()).collect::<Vec<_>>();
        MultifunctionFixture {
            poset: LatticeFixture::from_poset(p),
            codomain: (s.codomain != p.carrier()).then(|| names(&s.codomain)),
            values: p.elements().map(|v| (p.label(v).to_string(), names(s.value(v)))).collect(),
        }
    }

    pub fn to_multifunction(&self) -> Result<Multifunction, FixpointError> {
        let poset = self.poset.to_poset()?;
        let lookup = |label: &String| {
            poset.find(label).ok_or_else(|| OrderError::Malformed(format!("unknown element {label:?}")))
        };
        let collect = |labels: &Vec<String>| labels.iter().map(lookup).collect::<Result<ElemSet, _>>();
        let codomain = match &self.codomain {
            Some(c) => collect(c)?,
            None => poset.carrier(),
        };
        let mut values = vec![ElemSet::new(); poset.len()];
        for (label, vals) in &self.values {
            values[lookup(label)?.index()] = collect(vals)?;
        }
        Multifunction::new(poset, codomain, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FiniteLattice;

    fn set(ids: &[u32]) -> ElemSet {
        ids.iter().map(|&i| Elem(i)).collect()
    }

    #[test]
    fn subpoints_and_fixed_points() {
        let chain = FinitePoset::chain(3);
        let id = Multifunction::identity(&chain);
        assert_eq!(subpoints(&id), chain.carrier());
        assert_eq!(fixed_points(&id), chain.carrier());

        let top = Multifunction::constant(&chain, &set(&[2])).unwrap();
        assert_eq!(subpoints(&top), chain.carrier());
        assert_eq!(fixed_points(&top), set(&[2]));

        let shift = Multifunction::from_fn(&chain, |v| ElemSet::singleton(Elem(v.0.saturating_add(1).min(2)))).unwrap();
        assert_eq!(fixed_points(&shift), set(&[2]));

        let holes = Multifunction::on(chain.clone(), vec![set(&[1]), ElemSet::new(), set(&[2])]).unwrap();
        assert_eq!(subpoints(&holes), set(&[0, 2]));
    }

    #[test]
    fn codomain_restricts_subpoints() {
        let chain = FinitePoset::chain(3);
        let s = Multifunction::new(chain.clone(), set(&[1, 2]), vec![set(&[1]); 3]).unwrap();
        assert_eq!(subpoints(&s), set(&[1]));
        let err = Multifunction::new(chain, set(&[1]), vec![set(&[0]); 3]).unwrap_err();
        assert!(matches!(err, FixpointError::OutsideCodomain { .. }));
    }

    #[test]
    fn extremal_elements() {
        let chain = FinitePoset::chain(3);
        assert_eq!(maximal_elements(&chain.carrier(), &chain), set(&[2]));
        assert_eq!(greatest_element(&chain.carrier(), &chain), Some(Elem(2)));
        let anti = FinitePoset::antichain(2);
        assert_eq!(maximal_elements(&anti.carrier(), &anti), set(&[0, 1]));
        assert_eq!(greatest_element(&anti.carrier(), &anti), None);
        assert_eq!(maximal_elements(&ElemSet::new(), &chain), ElemSet::new());
        assert_eq!(greatest_element(&ElemSet::new(), &chain), None);
        assert_eq!(smallest_element(&chain.carrier(), &chain), Some(Elem(0)));
    }

    #[test]
    fn upward_properties() {
        let chain = FinitePoset::chain(2);
        assert!(is_increasing_upward(&Multifunction::identity(&chain)));
        assert!(is_increasing_upward(&Multifunction::constant(&chain, &set(&[0])).unwrap()));
        let flip = Multifunction::on(chain.clone(), vec![set(&[1]), set(&[0])]).unwrap();
        assert_eq!(increasing_upward_witness(&flip), Some((Elem(0), Elem(1))));
        assert!(is_permanent_upward(&Multifunction::constant(&chain, &set(&[1])).unwrap()));
        assert!(!is_permanent_upward(&Multifunction::identity(&chain)));

        let c3 = FinitePoset::chain(3);
        assert!(is_directed_upward(&set(&[0, 2]), &c3));
        // N-shaped poset: 0 < 2, 1 < 2, 1 < 3
        let n = FinitePoset::from_covers(["0", "1", "2", "3"].map(String::from).to_vec(), &[(0, 2), (1, 2), (1, 3)])
            .unwrap();
        assert!(!is_directed_upward(&set(&[2, 3]), &n));
        assert!(is_directed_downward(&set(&[1, 2, 3]), &n));
    }

    #[test]
    fn prop_meta_examples() {
        let sq = FiniteLattice::square();
        let p = sq.poset();
        assert!(check_prop_meta(&Multifunction::identity(p)).unwrap());
        assert!(check_prop_meta(&Multifunction::constant(p, &set(&[1])).unwrap()).unwrap());
        let flip = Multifunction::on(FinitePoset::chain(2), vec![set(&[1]), set(&[0])]).unwrap();
        assert!(matches!(check_prop_meta(&flip), Err(FixpointError::NotIncreasingUpward(..))));
    }

    #[test]
    fn inductive_subpoints() {
        let sq = FiniteLattice::square();
        let s = Multifunction::constant(sq.poset(), &set(&[1, 2])).unwrap();
        assert!(is_inductive(&subpoints(&s), sq.poset()));
        // chains of an antichain are singletons
        assert!(is_inductive(&set(&[1, 2]), sq.poset()));
        assert!(!is_inductive(&ElemSet::new(), sq.poset()));
    }

    #[test]
    fn report_and_csv() {
        let chain = FinitePoset::chain(3);
        let s = Multifunction::on(chain.clone(), vec![set(&[1]), set(&[1]), set(&[0])]).unwrap();
        let r = FixpointReport::build(&s);
        assert_eq!(r.subpoints, set(&[0, 1]));
        assert_eq!(r.fixed_points, set(&[1]));
        assert_eq!(r.greatest_fixed_point, Some(Elem(1)));
        assert_eq!(r.certificate, vec![(Elem(0), Elem(1)), (Elem(1), Elem(1))]);
        let mut buf = Vec::new();
        r.write_csv(&chain, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "element,is_subpoint,is_fixed_point\n0,1,0\n1,1,1\n2,0,0\n");
    }

    #[test]
    fn fixture_roundtrip() {
        let json = r#"{"poset": {"elements": ["lo", "hi"], "covers": [["lo", "hi"]]},
                       "values": {"lo": ["hi"], "hi": ["hi"]}}"#;
        let fx: MultifunctionFixture = serde_json::from_str(json).unwrap();
        let s = fx.to_multifunction().unwrap();
        assert_eq!(fixed_points(&s), set(&[1]));
        assert_eq!(MultifunctionFixture::from_multifunction(&s).to_multifunction().unwrap(), s);
    }
}
