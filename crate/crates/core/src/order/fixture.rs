use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Elem, ExtValue, ExtendedFunctional, FiniteLattice, FinitePoset, OrderError};

/// On-disk form of a poset or lattice: element labels plus cover pairs
/// `[lower, upper]`. The order is the reflexive-transitive closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFixture {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

impl LatticeFixture {
    pub fn from_poset(poset: &FinitePoset) -> Self {
        LatticeFixture {
            elements: poset.labels().to_vec(),
            covers: poset
                .covers()
                .into_iter()
                .map(|(a, b)| [poset.label(a).to_string(), poset.label(b).to_string()])
                .collect(),
        }
    }

    pub fn to_poset(&self) -> Result<FinitePoset, OrderError> {
        let index = |label: &str| {
            self.elements
                .iter()
                .position(|e| e == label)
                .ok_or_else(|| OrderError::Malformed(format!("cover mentions unknown element {label:?}")))
        };
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.elements {
            if !seen.insert(e) {
                return Err(OrderError::Malformed(format!("duplicate element label {e:?}")));
            }
        }
        let covers =
            self.covers.iter().map(|[a, b]| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>, OrderError>>()?;
        FinitePoset::from_covers(self.elements.clone(), &covers)
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice, OrderError> {
        FiniteLattice::from_poset(self.to_poset()?)
    }
}

/// On-disk functional: values keyed by element label. Labels that are
/// absent take the value `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionalFixture {
    pub values: BTreeMap<String, ExtValue>,
}

impl FunctionalFixture {
    pub fn from_functional(a: &ExtendedFunctional, poset: &FinitePoset) -> Self {
        FunctionalFixture {
            values: poset
                .elements()
                .filter(|&e| a.at(e).is_finite())
                .map(|e| (poset.label(e).to_string(), a.at(e)))
                .collect(),
        }
    }

    pub fn to_functional(&self, poset: &FinitePoset) -> Result<ExtendedFunctional, OrderError> {
        let mut values = vec![ExtValue::Infinite; poset.len()];
        for (label, &v) in &self.values {
            let e: Elem = poset
                .find(label)
                .ok_or_else(|| OrderError::Malformed(format!("functional mentions unknown element {label:?}")))?;
            values[e.index()] = v;
        }
        ExtendedFunctional::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_roundtrip() {
        let json = r#"{"elements": ["bot", "x", "y", "top"],
                       "covers": [["bot","x"],["bot","y"],["x","top"],["y","top"]]}"#;
        let fx: LatticeFixture = serde_json::from_str(json).unwrap();
        let lat = fx.to_lattice().unwrap();
        assert!(lat.is_distributive());
        assert_eq!(lat.poset().label(lat.top()), "top");
        let back = LatticeFixture::from_poset(lat.poset());
        assert_eq!(back.to_lattice().unwrap(), lat);
    }

    #[test]
    fn bad_fixtures_rejected() {
        let fx = LatticeFixture { elements: vec!["a".into()], covers: vec![["a".into(), "b".into()]] };
        assert!(matches!(fx.to_poset(), Err(OrderError::Malformed(_))));
        let fx = LatticeFixture { elements: vec!["a".into(), "a".into()], covers: vec![] };
        assert!(fx.to_poset().is_err());
    }

    #[test]
    fn functional_roundtrip() {
        let poset = FinitePoset::chain(3);
        let f: FunctionalFixture = serde_json::from_str(r#"{"0": [1, 2], "2": [-3, 1]}"#).unwrap();
        let a = f.to_functional(&poset).unwrap();
        assert_eq!(a.at(Elem(1)), ExtValue::Infinite);
        assert_eq!(a.at(Elem(0)), ExtValue::ratio(1, 2));
        assert_eq!(FunctionalFixture::from_functional(&a, &poset), f);
    }
}
