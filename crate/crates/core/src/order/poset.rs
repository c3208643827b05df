use super::{Elem, ElemSet, OrderError};

/// A finite partially ordered set with an explicit order matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<bool>,
    /// `up[a]` = { b : a ≤ b }, `down[a]` = { b : b ≤ a }.
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
}

impl FinitePoset {
    /// Builds a poset from a full relation table (row-major, `leq[a*n+b]` ⇔ a ≤ b),
    /// rejecting relations that are not partial orders.
    pub fn from_relation(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, OrderError> {
        let n = labels.len();
        if leq.len() != n * n {
            return Err(OrderError::Malformed(format!("relation table has {} entries, expected {}", leq.len(), n * n)));
        }
        for a in 0..n {
            if !leq[a * n + a] {
                return Err(OrderError::NotReflexive(labels[a].clone()));
            }
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(OrderError::NotAntisymmetric(labels[a].clone(), labels[b].clone()));
                }
                if !leq[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if leq[b * n + c] && !leq[a * n + c] {
                        return Err(OrderError::NotTransitive(labels[a].clone(), labels[b].clone(), labels[c].clone()));
                    }
                }
            }
        }
        Ok(Self::from_relation_unchecked(labels, leq))
    }

    pub(crate) fn from_relation_unchecked(labels: Vec<String>, leq: Vec<bool>) -> Self {
        let n = labels.len();
        let up = (0..n).map(|a| (0..n).filter(|&b| leq[a * n + b]).map(Elem::from).collect()).collect();
        let down = (0..n).map(|a| (0..n).filter(|&b| leq[b * n + a]).map(Elem::from).collect()).collect();
        FinitePoset { labels, leq, up, down }
    }

    /// Builds a poset from cover pairs `(lower, upper)` by reflexive-transitive closure.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(OrderError::Malformed(format!("cover ({a}, {b}) outside carrier of size {n}")));
            }
            leq[a * n + b] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_relation(labels, leq)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let leq = (0..n * n).map(|k| k / n <= k % n).collect();
        Self::from_relation_unchecked(default_labels(n), leq)
    }

    /// `n` pairwise incomparable elements.
    pub fn antichain(n: usize) -> Self {
        let leq = (0..n * n).map(|k| k / n == k % n).collect();
        Self::from_relation_unchecked(default_labels(n), leq)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.len()).map(Elem::from)
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.index() * self.len() + b.index()]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Principal filter `a↑`.
    pub fn up_set(&self, a: Elem) -> &ElemSet {
        &self.up[a.index()]
    }

    /// Principal ideal `a↓`.
    pub fn down_set(&self, a: Elem) -> &ElemSet {
        &self.down[a.index()]
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label).map(Elem::from)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.index() < self.len()
    }

    pub fn check_elem(&self, a: Elem) -> Result<(), OrderError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(OrderError::CarrierMismatch { elem: a.0, size: self.len() })
        }
    }

    pub fn check_set(&self, s: &ElemSet) -> Result<(), OrderError> {
        if s.bound() <= self.len() {
            Ok(())
        } else {
            Err(OrderError::CarrierMismatch { elem: (s.bound() - 1) as u32, size: self.len() })
        }
    }

    /// Same carrier with the reversed order.
    pub fn dual(&self) -> Self {
        let n = self.len();
        let leq = (0..n * n).map(|k| self.leq[(k % n) * n + k / n]).collect();
        FinitePoset { labels: self.labels.clone(), leq, up: self.down.clone(), down: self.up.clone() }
    }

    /// Cover pairs (Hasse diagram edges).
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_chain(&self, s: &ElemSet) -> bool {
        s.iter().all(|a| s.iter().all(|b| self.comparable(a, b)))
    }

    /// Upper bounds of `s` inside `within`.
    pub fn upper_bounds_in(&self, s: &ElemSet, within: &ElemSet) -> ElemSet {
        within.iter().filter(|&b| s.iter().all(|a| self.leq(a, b))).collect()
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn covers_closure_roundtrip() {
        let p = FinitePoset::from_covers(labels(&["b", "x", "y", "t"]), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(p.leq(Elem(0), Elem(3)));
        assert!(!p.comparable(Elem(1), Elem(2)));
        assert_eq!(p.covers().len(), 4);
        assert_eq!(p.find("t"), Some(Elem(3)));
    }

    #[test]
    fn cyclic_covers_rejected() {
        let err = FinitePoset::from_covers(labels(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, OrderError::NotAntisymmetric(..)));
    }

    #[test]
    fn bad_relation_rejected() {
        // a ≤ b, b ≤ c but not a ≤ c
        let leq = vec![true, true, false, false, true, true, false, false, true];
        let err = FinitePoset::from_relation(labels(&["a", "b", "c"]), leq).unwrap_err();
        assert!(matches!(err, OrderError::NotTransitive(..)));
    }

    #[test]
    fn dual_reverses() {
        let c = FinitePoset::chain(3);
        let d = c.dual();
        assert!(d.leq(Elem(2), Elem(0)));
        assert_eq!(d.up_set(Elem(2)).len(), 3);
        assert_eq!(d.dual(), c);
    }
}
