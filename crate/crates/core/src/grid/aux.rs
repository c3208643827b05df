use super::{GridError, GridProblem};

/// Cutoff `d(s)` for the band `[lo, hi]`: `-(lo - s)^(p-1)` below,
/// `0` inside, `(s - hi)^(p-1)` above.
#[inline]
pub fn cutoff_d(s: f64, lo: f64, hi: f64, p: f64) -> f64 {
    if s < lo {
        -(lo - s).powf(p - 1.0)
    } else if s > hi {
        (s - hi).powf(p - 1.0)
    } else {
        0.0
    }
}

/// `(d1, d2)` with `-(t - s)^(p-1) s >= d1 |s|^p - d2 |t|^(p-1) |s|` for `s <= t`.
pub fn coercivity_constants(p: f64) -> (f64, f64) {
    if p <= 2.0 {
        (1.0, 2f64.powf(2.0 - p))
    } else {
        (2f64.powf(2.0 - p), 1.0)
    }
}

/// `d0` in `|d(s)| <= d0 (|lo|^(p-1) + |s|^(p-1) + |hi|^(p-1))`.
pub fn cutoff_growth_constant(p: f64) -> f64 {
    2f64.powf(p - 2.0).max(1.0)
}

/// `(d3, c3)` in `h Σ d(u_i) u_i >= d3 ||u||_p^p - c3 (||lo||_p^p + ||hi||_p^p)`.
pub fn cutoff_lower_bound_constants(p: f64) -> (f64, f64) {
    let (d1, d2) = coercivity_constants(p);
    // Young: d2 a^(p-1) b <= (d1/2) b^p + c a^p
    let q = p / (p - 1.0);
    let delta = (p * d1 / 2.0).powf(1.0 / p);
    let c = d2.powf(q) / (delta.powf(q) * q);
    (d1 / 2.0, c.max(d1 / 2.0))
}

/// Piecewise-linear ramp: `y1` up to `x1`, linear in between, `y2` from `x2`
/// on. A degenerate ramp (`x1 == x2`) is identically zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl Bracket {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Bracket { x1, y1, x2, y2 }
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        if self.x1 >= self.x2 {
            0.0
        } else if s <= self.x1 {
            self.y1
        } else if s >= self.x2 {
            self.y2
        } else {
            self.y1 + (self.y2 - self.y1) * (s - self.x1) / (self.x2 - self.x1)
        }
    }
}

/// Data of the truncated problem: two subsolutions and two supersolutions
/// with their selections, and the combined band.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxData {
    pub lower: [Vec<f64>; 2],
    pub lower_eta: [Vec<f64>; 2],
    pub upper: [Vec<f64>; 2],
    pub upper_eta: [Vec<f64>; 2],
    /// Pointwise max of the two lower vectors.
    pub lo: Vec<f64>,
    /// Pointwise min of the two upper vectors.
    pub hi: Vec<f64>,
    pub lo_eta: Vec<f64>,
    pub hi_eta: Vec<f64>,
}

/// Failure of a compensator inequality at one node.
#[derive(Clone, Debug, PartialEq)]
pub struct CompensatorViolation {
    pub node: usize,
    pub upper_side: bool,
    pub index: usize,
    pub excess: f64,
}

impl AuxData {
    pub fn new(
        lower: [Vec<f64>; 2],
        lower_eta: [Vec<f64>; 2],
        upper: [Vec<f64>; 2],
        upper_eta: [Vec<f64>; 2],
    ) -> Result<Self, GridError> {
        let n = lower[0].len();
        let all = lower.iter().chain(&lower_eta).chain(&upper).chain(&upper_eta);
        if all.clone().any(|v| v.len() != n) {
            return Err(GridError::InvalidAux("vector lengths differ".into()));
        }
        if all.flat_map(|v| v.iter()).any(|x| !x.is_finite()) {
            return Err(GridError::InvalidAux("non-finite data".into()));
        }
        let mut lo = vec![0.0; n];
        let mut lo_eta = vec![0.0; n];
        let mut hi = vec![0.0; n];
        let mut hi_eta = vec![0.0; n];
        for i in 0..n {
            let k = if lower[0][i] >= lower[1][i] { 0 } else { 1 };
            lo[i] = lower[k][i];
            lo_eta[i] = lower_eta[k][i];
            let k = if upper[0][i] <= upper[1][i] { 0 } else { 1 };
            hi[i] = upper[k][i];
            hi_eta[i] = upper_eta[k][i];
        }
        Ok(AuxData { lower, lower_eta, upper, upper_eta, lo, hi, lo_eta, hi_eta })
    }

    /// Both lower slots equal, both upper slots equal.
    pub fn single(
        lower: Vec<f64>,
        lower_eta: Vec<f64>,
        upper: Vec<f64>,
        upper_eta: Vec<f64>,
    ) -> Result<Self, GridError> {
        AuxData::new(
            [lower.clone(), lower],
            [lower_eta.clone(), lower_eta],
            [upper.clone(), upper],
            [upper_eta.clone(), upper_eta],
        )
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    /// Truncated selection interval at node `i`.
    #[inline]
    pub fn truncate_g(&self, i: usize, s: f64, f: (f64, f64)) -> (f64, f64) {
        if s < self.lo[i] {
            (self.lo_eta[i], self.lo_eta[i])
        } else if s > self.hi[i] {
            (self.hi_eta[i], self.hi_eta[i])
        } else {
            f
        }
    }

    fn lower_bracket(&self, i: usize, k: usize) -> Bracket {
        Bracket::new(self.lower[k][i], self.lo_eta[i] - self.lower_eta[k][i], self.lo[i], 0.0)
    }

    fn upper_bracket(&self, i: usize, k: usize) -> Bracket {
        Bracket::new(self.hi[i], 0.0, self.upper[k][i], self.upper_eta[k][i] - self.hi_eta[i])
    }

    /// Compensator `h_i(s)`; nonincreasing in `s`.
    #[inline]
    pub fn compensator(&self, i: usize, s: f64) -> f64 {
        self.lower_bracket(i, 0).eval(s).abs() + self.lower_bracket(i, 1).eval(s).abs()
            - self.upper_bracket(i, 0).eval(s).abs()
            - self.upper_bracket(i, 1).eval(s).abs()
    }

    /// Kinks of the cutoff and compensator at node `i`.
    pub fn breakpoints(&self, i: usize) -> [f64; 6] {
        [self.lower[0][i], self.lower[1][i], self.lo[i], self.hi[i], self.upper[0][i], self.upper[1][i]]
    }

    /// Checks `lo_eta - lower_eta_k - h(s) <= 0` on `s < lower_k` and
    /// `upper_eta_k - hi_eta + h(s) <= 0` on `s > upper_k`. Since `h` is
    /// continuous and nonincreasing it suffices to test the region ends.
    pub fn compensator_violations(&self, tol: f64) -> Vec<CompensatorViolation> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for k in 0..2 {
                let e = self.lo_eta[i] - self.lower_eta[k][i] - self.compensator(i, self.lower[k][i]);
                if e > tol {
                    out.push(CompensatorViolation { node: i, upper_side: false, index: k, excess: e });
                }
                let e = self.upper_eta[k][i] - self.hi_eta[i] + self.compensator(i, self.upper[k][i]);
                if e > tol {
                    out.push(CompensatorViolation { node: i, upper_side: true, index: k, excess: e });
                }
            }
        }
        out
    }

    /// Band order, containment in `[sub, super]`, and membership of every
    /// selection in `f` at parameter `v`.
    pub fn validate(&self, prob: &GridProblem, v: &[f64], tol: f64) -> Result<(), GridError> {
        if self.len() != prob.n || v.len() != prob.n {
            return Err(GridError::InvalidAux(format!("expected {} nodes", prob.n)));
        }
        for i in 0..prob.n {
            if self.lo[i] > self.hi[i] + tol {
                return Err(GridError::InvalidAux(format!("lower band exceeds upper band at node {i}")));
            }
            if self.lo[i] < prob.sub[i] - tol || self.hi[i] > prob.sup[i] + tol {
                return Err(GridError::InvalidAux(format!("band leaves [sub, super] at node {i}")));
            }
            for k in 0..2 {
                let (a, b) = prob.f.interval_hull(i, self.lower[k][i], v[i], tol);
                let y = self.lower_eta[k][i];
                if y < a - tol || y > b + tol {
                    return Err(GridError::InvalidAux(format!("lower selection {k} outside f at node {i}")));
                }
                let (a, b) = prob.f.interval_hull(i, self.upper[k][i], v[i], tol);
                let y = self.upper_eta[k][i];
                if y < a - tol || y > b + tol {
                    return Err(GridError::InvalidAux(format!("upper selection {k} outside f at node {i}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_examples() {
        assert_eq!(cutoff_d(-0.5, 0.0, 1.0, 2.0), -0.5);
        assert_eq!(cutoff_d(2.0, 0.0, 1.0, 3.0), 1.0);
        assert_eq!(cutoff_d(0.5, 0.0, 1.0, 3.0), 0.0);
    }

    #[test]
    fn constants() {
        assert_eq!(coercivity_constants(2.0), (1.0, 1.0));
        let (d1, d2) = coercivity_constants(1.5);
        assert_eq!(d1, 1.0);
        assert!((d2 - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(coercivity_constants(3.0), (0.5, 1.0));
    }

    #[test]
    fn coercivity_inequality_on_a_grid() {
        for p in [1.2, 1.5, 2.0, 2.5, 3.0, 4.0] {
            let (d1, d2) = coercivity_constants(p);
            for a in -40..=40 {
                for b in -40..=40 {
                    let (s, t) = (a as f64 / 8.0, b as f64 / 8.0);
                    if s > t {
                        continue;
                    }
                    let lhs = -(t - s).powf(p - 1.0) * s;
                    let rhs = d1 * s.abs().powf(p) - d2 * t.abs().powf(p - 1.0) * s.abs();
                    assert!(lhs >= rhs - 1e-9, "p={p} s={s} t={t}: {lhs} < {rhs}");
                }
            }
        }
    }

    #[test]
    fn cutoff_growth_and_lower_bound_pointwise() {
        for p in [1.5, 2.0, 3.0, 5.0] {
            let d0 = cutoff_growth_constant(p);
            let (d3, c3) = cutoff_lower_bound_constants(p);
            for (lo, hi) in [(-1.0, 0.5), (0.0, 0.0), (0.3, 2.0), (-2.0, -1.0)] {
                for k in -60..=60 {
                    let s = k as f64 / 10.0;
                    let d = cutoff_d(s, lo, hi, p);
                    let pw = |x: f64| x.abs().powf(p - 1.0);
                    assert!(d.abs() <= d0 * (pw(lo) + pw(s) + pw(hi)) + 1e-9, "p={p} s={s}");
                    let pp = |x: f64| x.abs().powf(p);
                    assert!(d * s >= d3 * pp(s) - c3 * (pp(lo) + pp(hi)) - 1e-9, "p={p} s={s} lo={lo} hi={hi}");
                }
            }
        }
    }

    #[test]
    fn unit_growth_constant_fails_above_two() {
        let p = 3.0;
        let d = cutoff_d(1.0, -1.0, -1.0, p);
        assert_eq!(d, 4.0);
        assert!(d > 1.0 + 1.0 + 1.0);
        assert!(d <= cutoff_growth_constant(p) * 3.0);
    }

    #[test]
    fn bracket_examples() {
        let l = Bracket::new(0.0, 0.0, 1.0, 2.0);
        assert_eq!(l.eval(-1.0), 0.0);
        assert_eq!(l.eval(0.5), 1.0);
        assert_eq!(l.eval(3.0), 2.0);
        assert_eq!(Bracket::new(1.0, 5.0, 1.0, 7.0).eval(0.0), 0.0);
    }

    #[test]
    fn compensator_sum_of_brackets() {
        // lower_1 = -1, lower_2 = -0.5, combined lo = 0 would need a third
        // vector; instead evaluate the ramps directly at s = -2
        let a = Bracket::new(-1.0, 0.3, 0.0, 0.0);
        let b = Bracket::new(-0.5, -0.1, 0.0, 0.0);
        assert!((a.eval(-2.0).abs() + b.eval(-2.0).abs() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn combination_and_compensator_inequalities() {
        let aux = AuxData::new(
            [vec![-1.0, 0.0], vec![-0.5, 0.0]],
            [vec![2.0, 1.0], vec![1.0, 1.0]],
            [vec![1.0, 2.0], vec![2.0, 2.0]],
            [vec![0.0, -1.0], vec![3.0, -1.0]],
        )
        .unwrap();
        assert_eq!(aux.lo, vec![-0.5, 0.0]);
        assert_eq!(aux.lo_eta, vec![1.0, 1.0]);
        assert_eq!(aux.hi, vec![1.0, 2.0]);
        assert_eq!(aux.hi_eta, vec![0.0, -1.0]);
        assert!(aux.compensator_violations(1e-12).is_empty());
        // plateau values: |1 - 2| below -1, |0 - 3| above 2
        assert_eq!(aux.compensator(0, -5.0), 1.0);
        assert_eq!(aux.compensator(0, 5.0), -3.0);
        assert_eq!(aux.compensator(0, 0.0), 0.0);
        // equal lower vectors with different selections break the inequality
        let bad = AuxData::new(
            [vec![0.0], vec![0.0]],
            [vec![1.0], vec![2.0]],
            [vec![1.0], vec![1.0]],
            [vec![0.0], vec![0.0]],
        )
        .unwrap();
        assert_eq!(bad.lo_eta, vec![1.0]);
        assert!(bad.compensator_violations(1e-12).is_empty());
        let bad = AuxData::new(
            [vec![0.0], vec![0.0]],
            [vec![2.0], vec![1.0]],
            [vec![1.0], vec![1.0]],
            [vec![0.0], vec![0.0]],
        )
        .unwrap();
        let v = bad.compensator_violations(1e-12);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].node, v[0].upper_side, v[0].index), (0, false, 1));
    }

    #[test]
    fn compensator_is_nonincreasing() {
        let aux = AuxData::new(
            [vec![-1.0], vec![-0.2]],
            [vec![3.0], vec![-1.0]],
            [vec![0.7], vec![1.5]],
            [vec![-2.0], vec![4.0]],
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        for k in -300..=300 {
            let h = aux.compensator(0, k as f64 / 100.0);
            assert!(h <= prev + 1e-15);
            prev = h;
        }
    }
}
