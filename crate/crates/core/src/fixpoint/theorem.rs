use super::{directed_upward_witness, greatest_element, permanent_upward_witness, FixpointError, Multifunction};
use crate::order::{Elem, FiniteLattice};

/// Greatest (or, for the dual entry point, smallest) fixed point together
/// with the iterates that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalFixpoint {
    pub point: Elem,
    /// `top, m(top), m(m(top)), …` where `m(v)` is the greatest element of
    /// the suboperator value at `v`.
    pub descent: Vec<Elem>,
    /// Witness ascent from the start point through elements of `S`. It ends
    /// at some fixed point below `point`.
    pub ascent: Vec<Elem>,
}

fn hypothesis(clause: &'static str, witness: String) -> FixpointError {
    FixpointError::Hypothesis { clause, witness }
}

fn check_hypotheses(
    s: &Multifunction,
    sub: &Multifunction,
    lattice: &FiniteLattice,
    start: Elem,
) -> Result<(), FixpointError> {
    let p = lattice.poset();
    if s.domain() != p || sub.domain() != p {
        return Err(hypothesis("(i)", "multifunction domains differ from the lattice".into()));
    }
    p.check_elem(start)?;
    let name = |e: Elem| p.label(e).to_string();
    if let Some(v) = p.elements().find(|&v| s.value(v).is_empty()) {
        return Err(hypothesis("(ii) nonempty values", format!("S({}) is empty", name(v))));
    }
    if let Some((a, b)) = permanent_upward_witness(sub) {
        return Err(hypothesis(
            "(iii) suboperator permanent upward",
            format!(
                "{} <= {} but the value at {} is not contained in the value at {}",
                name(a),
                name(b),
                name(a),
                name(b)
            ),
        ));
    }
    for v in p.elements() {
        if let Some((a, b)) = directed_upward_witness(sub.value(v), p) {
            return Err(hypothesis(
                "(iii) suboperator values directed upward",
                format!("{} and {} in the value at {} have no upper bound there", name(a), name(b), name(v)),
            ));
        }
        if let Some(a) = s.value(v).difference(sub.value(v)).first() {
            return Err(hypothesis(
                "(iii) S(v) contained in suboperator value",
                format!("{} ∈ S({}) is missing from the suboperator value", name(a), name(v)),
            ));
        }
        if let Some(a) = sub.value(v).iter().find(|&a| !p.up_set(a).intersects(s.value(v))) {
            return Err(hypothesis(
                "(iii) suboperator value <=* S(v)",
                format!("{} in the suboperator value at {} has no upper bound in S({})", name(a), name(v), name(v)),
            ));
        }
    }
    if !p.up_set(start).intersects(sub.value(start)) {
        return Err(hypothesis("(iv) start is a subpoint of the suboperator", format!("start {}", name(start))));
    }
    Ok(())
}

fn ascend(s: &Multifunction, lattice: &FiniteLattice, start: Elem) -> Vec<Elem> {
    let p = lattice.poset();
    let mut path = vec![start];
    let mut v = start;
    // start ≤* S(start) follows from the hypotheses; every later iterate is a
    // witness b ∈ S(v) with v ≤ b, hence again a subpoint of S.
    while !s.value(v).contains(v) {
        let above = p.up_set(v).intersection(s.value(v));
        let next = above
            .iter()
            .find(|&b| !above.iter().any(|c| p.lt(b, c)))
            .expect("hypotheses guarantee a witness above each iterate");
        path.push(next);
        v = next;
    }
    path
}

/// Greatest fixed point of `s` given a suboperator `sub` with
///
/// * nonempty values of `s`,
/// * `sub` permanent upward with directed-upward values,
/// * `s(v) ⊆ sub(v) ≤* s(v)` for all `v`,
/// * `start ≤* sub(start)`.
///
/// Each `sub(v)` then has a greatest element `m(v)` and `m` is monotone; the
/// iteration `x ← m(x)` from the top stabilises at the greatest fixed point
/// of `s`, which dominates `start`.
pub fn greatest_fixed_point_theorem(
    s: &Multifunction,
    sub: &Multifunction,
    lattice: &FiniteLattice,
    start: Elem,
) -> Result<ExtremalFixpoint, FixpointError> {
    check_hypotheses(s, sub, lattice, start)?;
    let p = lattice.poset();
    let top_of =
        |v: Elem| greatest_element(sub.value(v), p).expect("directed finite nonempty set has a greatest element");

    let mut descent = vec![lattice.top()];
    loop {
        let x = *descent.last().expect("nonempty");
        let next = top_of(x);
        if next == x {
            break;
        }
        debug_assert!(p.lt(next, x), "descent must decrease");
        descent.push(next);
    }
    let point = *descent.last().expect("nonempty");
    debug_assert!(s.value(point).contains(point));

    let ascent = ascend(s, lattice, start);
    let reached = *ascent.last().expect("nonempty");
    if !p.leq(reached, point) || !p.leq(start, point) {
        return Err(hypothesis(
            "(iii) consistency",
            format!("ascent ended at {} which is not below {}", p.label(reached), p.label(point)),
        ));
    }
    Ok(ExtremalFixpoint { point, descent, ascent })
}

/// Order dual of [`greatest_fixed_point_theorem`]: smallest fixed point of
/// `s` given a superoperator `sup` and a start point with `sup(start) ≤* start`
/// in the dual sense.
pub fn smallest_fixed_point_theorem(
    s: &Multifunction,
    sup: &Multifunction,
    lattice: &FiniteLattice,
    start: Elem,
) -> Result<ExtremalFixpoint, FixpointError> {
    greatest_fixed_point_theorem(&s.dual(), &sup.dual(), &lattice.dual(), start)
}
