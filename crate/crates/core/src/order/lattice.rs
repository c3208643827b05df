use super::poset::default_labels;
use super::{Elem, ElemSet, FinitePoset, OrderError};

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    distributive: bool,
}

impl FiniteLattice {
    /// Computes meets and joins from the order, failing if some pair lacks a
    /// greatest lower or least upper bound.
    pub fn from_poset(poset: FinitePoset) -> Result<Self, OrderError> {
        let n = poset.len();
        if n == 0 {
            return Err(OrderError::Malformed("a lattice needs at least one element".into()));
        }
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in poset.elements() {
            for b in poset.elements() {
                let lower = poset.down_set(a).intersection(poset.down_set(b));
                let glb = lower.iter().find(|&c| lower.iter().all(|d| poset.leq(d, c)));
                let upper = poset.up_set(a).intersection(poset.up_set(b));
                let lub = upper.iter().find(|&c| upper.iter().all(|d| poset.leq(c, d)));
                match (glb, lub) {
                    (Some(m), Some(j)) => {
                        meet.push(m);
                        join.push(j);
                    }
                    _ => return Err(OrderError::NotALattice(poset.label(a).to_string(), poset.label(b).to_string())),
                }
            }
        }
        let mut lat = FiniteLattice { poset, meet, join, distributive: false };
        lat.distributive = lat.check_distributive();
        Ok(lat)
    }

    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, OrderError> {
        Self::from_poset(FinitePoset::from_covers(labels, covers)?)
    }

    pub fn chain(n: usize) -> Self {
        Self::from_poset(FinitePoset::chain(n)).expect("chains are lattices")
    }

    /// Componentwise-ordered product; element `(i, j)` has id `i * rhs.len() + j`.
    pub fn product(lhs: &FiniteLattice, rhs: &FiniteLattice) -> Self {
        let (n, m) = (lhs.len(), rhs.len());
        let size = n * m;
        let mut labels = Vec::with_capacity(size);
        for i in lhs.elements() {
            for j in rhs.elements() {
                labels.push(format!("({},{})", lhs.poset.label(i), rhs.poset.label(j)));
            }
        }
        let mut leq = vec![false; size * size];
        for a in 0..size {
            for b in 0..size {
                leq[a * size + b] =
                    lhs.leq(Elem::from(a / m), Elem::from(b / m)) && rhs.leq(Elem::from(a % m), Elem::from(b % m));
            }
        }
        let poset = FinitePoset::from_relation_unchecked(labels, leq);
        let combine = |l: Elem, r: Elem| Elem::from(l.index() * m + r.index());
        let mut meet = Vec::with_capacity(size * size);
        let mut join = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let (ai, aj) = (Elem::from(a / m), Elem::from(a % m));
                let (bi, bj) = (Elem::from(b / m), Elem::from(b % m));
                meet.push(combine(lhs.meet(ai, bi), rhs.meet(aj, bj)));
                join.push(combine(lhs.join(ai, bi), rhs.join(aj, bj)));
            }
        }
        FiniteLattice { poset, meet, join, distributive: lhs.distributive && rhs.distributive }
    }

    /// `{0,1}^k` ordered componentwise.
    pub fn boolean(k: usize) -> Self {
        let two = Self::chain(2);
        (1..k).fold(if k == 0 { Self::chain(1) } else { two.clone() }, |acc, _| Self::product(&acc, &two))
    }

    /// The square `{0,1}²`: bottom, two incomparable atoms, top.
    pub fn square() -> Self {
        let labels = ["bot", "x", "y", "top"].iter().map(|s| s.to_string()).collect();
        Self::from_covers(labels, &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("square")
    }

    /// M₃: bottom, three atoms, top (modular, not distributive).
    pub fn m3() -> Self {
        let labels = ["bot", "a", "b", "c", "top"].iter().map(|s| s.to_string()).collect();
        Self::from_covers(labels, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3")
    }

    /// N₅: bottom < a < b < top and bottom < c < top.
    pub fn n5() -> Self {
        let labels = ["bot", "a", "b", "c", "top"].iter().map(|s| s.to_string()).collect();
        Self::from_covers(labels, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5")
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        self.poset.elements()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.index() * self.len() + b.index()]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.index() * self.len() + b.index()]
    }

    pub fn bottom(&self) -> Elem {
        self.elements().fold(Elem(0), |acc, e| self.meet(acc, e))
    }

    pub fn top(&self) -> Elem {
        self.elements().fold(Elem(0), |acc, e| self.join(acc, e))
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    fn check_distributive(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements().all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// Order dual: meet and join swap roles.
    pub fn dual(&self) -> Self {
        FiniteLattice {
            poset: self.poset.dual(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            distributive: self.distributive,
        }
    }

    /// `u ∧ S` = { u ∧ w : w ∈ S }.
    pub fn meet_with_set(&self, u: Elem, s: &ElemSet) -> ElemSet {
        s.iter().map(|w| self.meet(u, w)).collect()
    }

    /// `u ∨ S` = { u ∨ w : w ∈ S }.
    pub fn join_with_set(&self, u: Elem, s: &ElemSet) -> ElemSet {
        s.iter().map(|w| self.join(u, w)).collect()
    }

    /// Exhaustive check of the lattice laws against the order (used by tests
    /// and the verification suites).
    pub fn laws_hold(&self) -> bool {
        let els: Vec<Elem> = self.elements().collect();
        for &a in &els {
            for &b in &els {
                let m = self.meet(a, b);
                let j = self.join(a, b);
                if !(self.leq(m, a) && self.leq(m, b) && self.leq(a, j) && self.leq(b, j)) {
                    return false;
                }
                if m != self.meet(b, a) || j != self.join(b, a) {
                    return false;
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return false;
                }
                for &c in &els {
                    if self.leq(c, a) && self.leq(c, b) && !self.leq(c, m) {
                        return false;
                    }
                    if self.leq(a, c) && self.leq(b, c) && !self.leq(j, c) {
                        return false;
                    }
                    if self.meet(self.meet(a, b), c) != self.meet(a, self.meet(b, c))
                        || self.join(self.join(a, b), c) != self.join(a, self.join(b, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Every lattice with `1..=max_n` elements up to isomorphism.
///
/// Candidates are enumerated on labellings compatible with a linear
/// extension (bottom = 0, top = n-1, relations only from lower to higher ids)
/// and deduplicated by a canonical relation code over permutations of the
/// middle elements.
pub fn lattice_catalog(max_n: usize) -> Vec<FiniteLattice> {
    assert!(max_n <= 7, "catalog enumeration is limited to 7 elements");
    let mut out = Vec::new();
    for n in 1..=max_n {
        if n <= 2 {
            out.push(FiniteLattice::chain(n));
            continue;
        }
        let middle: Vec<usize> = (1..n - 1).collect();
        let pairs: Vec<(usize, usize)> =
            middle.iter().flat_map(|&a| middle.iter().filter(move |&&b| a < b).map(move |&b| (a, b))).collect();
        let perms = permutations(middle.len());
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
                leq[i] = true; // 0 ≤ i
                leq[i * n + n - 1] = true; // i ≤ top
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    leq[a * n + b] = true;
                }
            }
            let Ok(poset) = FinitePoset::from_relation(default_labels(n), leq.clone()) else {
                continue;
            };
            let Ok(lat) = FiniteLattice::from_poset(poset) else {
                continue;
            };
            let code = perms
                .iter()
                .map(|perm| {
                    let map = |i: usize| if i == 0 || i == n - 1 { i } else { 1 + perm[i - 1] };
                    let mut bits = vec![false; n * n];
                    for a in 0..n {
                        for b in 0..n {
                            bits[map(a) * n + map(b)] = leq[a * n + b];
                        }
                    }
                    bits
                })
                .min()
                .expect("at least one permutation");
            if seen.insert(code) {
                out.push(lat);
            }
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Every poset with `1..=max_n` elements up to isomorphism.
pub fn poset_catalog(max_n: usize) -> Vec<FinitePoset> {
    assert!(max_n <= 6, "poset enumeration is limited to 6 elements");
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let perms = permutations(n);
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    leq[a * n + b] = true;
                }
            }
            let Ok(poset) = FinitePoset::from_relation(default_labels(n), leq.clone()) else {
                continue;
            };
            let code = perms
                .iter()
                .map(|perm| {
                    let mut bits = vec![false; n * n];
                    for a in 0..n {
                        for b in 0..n {
                            bits[perm[a] * n + perm[b]] = leq[a * n + b];
                        }
                    }
                    bits
                })
                .min()
                .expect("at least one permutation");
            if seen.insert(code) {
                out.push(poset);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_lattices() {
        assert!(FiniteLattice::square().is_distributive());
        assert!(!FiniteLattice::m3().is_distributive());
        assert!(!FiniteLattice::n5().is_distributive());
        assert!(FiniteLattice::chain(4).is_distributive());
        let b3 = FiniteLattice::boolean(3);
        assert_eq!(b3.len(), 8);
        assert!(b3.is_distributive());
        assert!(b3.laws_hold());
        assert_eq!(b3.bottom(), Elem(0));
        assert_eq!(b3.top(), Elem(7));
    }

    #[test]
    fn non_lattice_rejected() {
        // two minimal elements below two maximal ones: no meet of the tops
        let p = FinitePoset::from_covers(default_labels(4), &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(matches!(FiniteLattice::from_poset(p), Err(OrderError::NotALattice(..))));
    }

    #[test]
    fn catalog_counts_match_known_sequences() {
        // unlabeled lattices on n = 1..6 nodes: 1, 1, 1, 2, 5, 15
        let cat = lattice_catalog(6);
        let count = |n: usize| cat.iter().filter(|l| l.len() == n).count();
        assert_eq!((1..=6).map(count).collect::<Vec<_>>(), vec![1, 1, 1, 2, 5, 15]);
        // distributive ones
        let dist = |n: usize| cat.iter().filter(|l| l.len() == n && l.is_distributive()).count();
        assert_eq!((1..=6).map(dist).collect::<Vec<_>>(), vec![1, 1, 1, 2, 3, 5]);
        assert!(cat.iter().all(|l| l.laws_hold()));
    }

    #[test]
    fn poset_catalog_counts() {
        // unlabeled posets: 1, 2, 5, 16, 63
        let cat = poset_catalog(5);
        let count = |n: usize| cat.iter().filter(|p| p.len() == n).count();
        assert_eq!((1..=5).map(count).collect::<Vec<_>>(), vec![1, 2, 5, 16, 63]);
    }

    #[test]
    fn dual_lattice_swaps_operations() {
        let l = FiniteLattice::n5();
        let d = l.dual();
        assert_eq!(d.top(), l.bottom());
        for a in l.elements() {
            for b in l.elements() {
                assert_eq!(d.meet(a, b), l.join(a, b));
            }
        }
        assert!(d.laws_hold());
    }
}
