use serde::{Deserialize, Serialize};

use super::{QvipError, QvipInstance};
use crate::order::{Elem, ElemSet, FinitePoset, FunctionalFixture, LatticeFixture, OrderError};

/// One `(u, v)` cell of an on-disk instance. Missing `k` or `t` default to
/// the whole carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QvipEntry {
    pub u: String,
    pub v: String,
    pub a: Vec<FunctionalFixture>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
}

/// On-disk instance. Cells without an entry have an empty functional set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QvipFixture {
    pub lattice: LatticeFixture,
    pub entries: Vec<QvipEntry>,
}

fn lookup(poset: &FinitePoset, label: &str) -> Result<Elem, OrderError> {
    poset.find(label).ok_or_else(|| OrderError::Malformed(format!("unknown element {label:?}")))
}

impl QvipFixture {
    pub fn to_instance(&self) -> Result<QvipInstance, QvipError> {
        let lattice = self.lattice.to_lattice()?;
        let p = lattice.poset().clone();
        let n = p.len();
        let mut pool = Vec::new();
        let mut family = vec![Vec::new(); n * n];
        let mut admissible = vec![p.carrier(); n * n];
        let mut tests = vec![p.carrier(); n * n];
        let to_set =
            |labels: &Vec<String>| -> Result<ElemSet, OrderError> { labels.iter().map(|l| lookup(&p, l)).collect() };
        for e in &self.entries {
            let k = lookup(&p, &e.u)?.index() * n + lookup(&p, &e.v)?.index();
            for f in &e.a {
                let a = f.to_functional(&p)?;
                family[k].push(super::intern(&mut pool, &a));
            }
            if let Some(ks) = &e.k {
                admissible[k] = to_set(ks)?;
            }
            if let Some(ts) = &e.t {
                tests[k] = to_set(ts)?;
            }
        }
        QvipInstance::new(lattice, pool, vec![family], admissible, tests)
    }

    pub fn from_instance(inst: &QvipInstance) -> Self {
        let p = inst.lattice().poset();
        let names = |s: &ElemSet| s.iter().map(|e| p.label(e).to_string()).collect::<Vec<_>>();
        let full = p.carrier();
        let mut entries = Vec::new();
        for u in p.elements() {
            for v in p.elements() {
                let (k, t) = (inst.admissible(u, v), inst.tests(u, v));
                entries.push(QvipEntry {
                    u: p.label(u).to_string(),
                    v: p.label(v).to_string(),
                    a: inst.functionals(u, v).iter().map(|a| FunctionalFixture::from_functional(a, p)).collect(),
                    k: (*k != full).then(|| names(k)),
                    t: (*t != full).then(|| names(t)),
                });
            }
        }
        QvipFixture { lattice: LatticeFixture::from_poset(p), entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvip::solve_parameterized;

    #[test]
    fn fixture_roundtrip_preserves_solutions() {
        let json = r#"{
          "lattice": {"elements": ["0", "1", "2"], "covers": [["0","1"],["1","2"]]},
          "entries": [
            {"u": "0", "v": "0", "a": [{"0": [0,1], "1": [1,1], "2": [2,1]}]},
            {"u": "1", "v": "0", "a": [{"0": [0,1], "1": [1,1], "2": [2,1]}], "t": ["1", "2"]},
            {"u": "2", "v": "0", "a": [{"2": [0,1]}], "k": ["0"]}
          ]
        }"#;
        let fx: QvipFixture = serde_json::from_str(json).unwrap();
        let inst = fx.to_instance().unwrap();
        let sol = solve_parameterized(&inst, Elem(0)).solutions;
        assert_eq!(sol, [Elem(0), Elem(1)].into_iter().collect());
        let back = QvipFixture::from_instance(&inst).to_instance().unwrap();
        for v in inst.lattice().elements() {
            assert_eq!(solve_parameterized(&back, v).solutions, solve_parameterized(&inst, v).solutions);
        }
    }
}
