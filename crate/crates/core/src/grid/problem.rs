use serde::{Deserialize, Serialize};

use super::GridError;

/// A jump of height `height` at `at`: contributes `0` below, `height` above,
/// and the closed interval between the two at the jump itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub at: f64,
    pub height: f64,
}

impl Jump {
    #[inline]
    fn side(&self, x: f64) -> (f64, f64) {
        if x < self.at {
            (0.0, 0.0)
        } else if x > self.at {
            (self.height, self.height)
        } else {
            (self.height.min(0.0), self.height.max(0.0))
        }
    }

    /// Hull of the contribution over `[x - tau, x + tau]`.
    #[inline]
    fn side_hull(&self, x: f64, tau: f64) -> (f64, f64) {
        if x + tau < self.at {
            (0.0, 0.0)
        } else if x - tau > self.at {
            (self.height, self.height)
        } else {
            (self.height.min(0.0), self.height.max(0.0))
        }
    }
}

/// Scalar broadcast to every node, or one value per node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeValues {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl NodeValues {
    pub fn resolve(&self, n: usize, field: &str) -> Result<Vec<f64>, GridError> {
        match self {
            NodeValues::Scalar(x) => Ok(vec![*x; n]),
            NodeValues::Vector(v) if v.len() == n => Ok(v.clone()),
            NodeValues::Vector(v) => Err(GridError::Config(format!("{field}: expected {n} values, got {}", v.len()))),
        }
    }
}

impl Default for NodeValues {
    fn default() -> Self {
        NodeValues::Scalar(0.0)
    }
}

/// Interval-valued `f(i, s, t) = [lo, hi]`:
///
/// `lo = offset_i + s_slope * s + Σ s_jumps(s) + Σ t_jumps(t)` and
/// `hi = lo + width_i`, where each jump contributes its closed interval at the
/// jump point. Every t-jump height must be `<= 0`, so `f` is decreasing in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepBifunction {
    pub offset: Vec<f64>,
    pub width: Vec<f64>,
    pub s_slope: f64,
    pub s_jumps: Vec<Jump>,
    pub t_jumps: Vec<Jump>,
}

impl StepBifunction {
    pub fn constant(n: usize, value: f64) -> Self {
        StepBifunction { offset: vec![value; n], width: vec![0.0; n], s_slope: 0.0, s_jumps: vec![], t_jumps: vec![] }
    }

    /// `-c0 - c1 * [t >= theta]`, closed at `theta`.
    pub fn step_in_t(n: usize, c0: f64, c1: f64, theta: f64) -> Self {
        StepBifunction {
            offset: vec![-c0; n],
            width: vec![0.0; n],
            s_slope: 0.0,
            s_jumps: vec![],
            t_jumps: vec![Jump { at: theta, height: -c1 }],
        }
    }

    #[inline]
    pub fn interval(&self, i: usize, s: f64, t: f64) -> (f64, f64) {
        let base = self.offset[i] + self.s_slope * s;
        let (mut lo, mut hi) = (base, base + self.width[i]);
        for j in &self.s_jumps {
            let (a, b) = j.side(s);
            lo += a;
            hi += b;
        }
        for j in &self.t_jumps {
            let (a, b) = j.side(t);
            lo += a;
            hi += b;
        }
        (lo, hi)
    }

    /// Hull of the values over the box `[s ± tau] × [t ± tau]`.
    pub fn interval_hull(&self, i: usize, s: f64, t: f64, tau: f64) -> (f64, f64) {
        let (a, b) = (self.s_slope * (s - tau), self.s_slope * (s + tau));
        let mut lo = self.offset[i] + a.min(b);
        let mut hi = self.offset[i] + a.max(b) + self.width[i];
        for j in &self.s_jumps {
            let (x, y) = j.side_hull(s, tau);
            lo += x;
            hi += y;
        }
        for j in &self.t_jumps {
            let (x, y) = j.side_hull(t, tau);
            lo += x;
            hi += y;
        }
        (lo, hi)
    }

    /// Jump locations in `s`.
    pub fn s_breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.s_jumps.iter().map(|j| j.at)
    }

    /// Upper bound of `|y|` over `y ∈ f(i, s, t)` with `s, t` in `[lo_i, hi_i]`.
    pub fn growth_bound(&self, i: usize, lo: f64, hi: f64) -> f64 {
        let reach = lo.abs().max(hi.abs());
        let jumps: f64 = self.s_jumps.iter().chain(&self.t_jumps).map(|j| j.height.abs()).sum();
        self.offset[i].abs() + self.width[i] + self.s_slope.abs() * reach + jumps
    }
}

/// `psi_i(v) = base_i + local_slope * v_i + mean_slope * mean(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineObstacle {
    pub base: Vec<f64>,
    pub local_slope: f64,
    pub mean_slope: f64,
}

impl AffineObstacle {
    pub fn constant(n: usize, value: f64) -> Self {
        AffineObstacle { base: vec![value; n], local_slope: 0.0, mean_slope: 0.0 }
    }

    pub fn eval(&self, v: &[f64]) -> Vec<f64> {
        let mean = if self.mean_slope == 0.0 { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
        self.base.iter().zip(v).map(|(b, x)| b + self.local_slope * x + self.mean_slope * mean).collect()
    }
}

/// Discretised inclusion on `(0, 1)` with zero boundary values.
#[derive(Clone, Debug, PartialEq)]
pub struct GridProblem {
    pub n: usize,
    pub p: f64,
    /// Flux `phi(xi) = weight * |xi|^(p-2) * xi`.
    pub flux_weight: f64,
    pub f: StepBifunction,
    pub obstacle: Option<AffineObstacle>,
    pub sub: Vec<f64>,
    pub sup: Vec<f64>,
    pub growth: Vec<f64>,
}

impl GridProblem {
    /// Checks shapes, `p > 1`, `sub <= sup`, interval widths, monotonicity in
    /// `t` and of the obstacle, and fills the growth bound when empty.
    pub fn new(
        n: usize,
        p: f64,
        flux_weight: f64,
        f: StepBifunction,
        obstacle: Option<AffineObstacle>,
        sub: Vec<f64>,
        sup: Vec<f64>,
    ) -> Result<Self, GridError> {
        if n == 0 {
            return Err(GridError::Config("n must be positive".into()));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(GridError::Config(format!("p must lie in (1, inf), got {p}")));
        }
        if !(flux_weight > 0.0 && flux_weight.is_finite()) {
            return Err(GridError::Config(format!("flux weight must be positive, got {flux_weight}")));
        }
        for (name, len) in
            [("f.offset", f.offset.len()), ("f.width", f.width.len()), ("sub", sub.len()), ("super", sup.len())]
        {
            if len != n {
                return Err(GridError::Config(format!("{name}: expected {n} values, got {len}")));
            }
        }
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        if !finite(&f.offset) || !finite(&f.width) || !f.s_slope.is_finite() || !finite(&sub) || !finite(&sup) {
            return Err(GridError::Config("non-finite problem data".into()));
        }
        if let Some(i) = f.width.iter().position(|&w| w < 0.0) {
            return Err(GridError::Config(format!("f.width is negative at node {i}")));
        }
        if let Some(j) = f.t_jumps.iter().find(|j| !(j.height <= 0.0) || !j.at.is_finite()) {
            return Err(GridError::Config(format!(
                "t-jump at {} has height {}; f must be decreasing in t",
                j.at, j.height
            )));
        }
        if f.s_jumps.iter().any(|j| !j.height.is_finite() || !j.at.is_finite()) {
            return Err(GridError::Config("non-finite s-jump".into()));
        }
        if let Some(i) = (0..n).find(|&i| sub[i] > sup[i]) {
            return Err(GridError::Config(format!("sub exceeds super at node {i}")));
        }
        if let Some(ob) = &obstacle {
            if ob.base.len() != n {
                return Err(GridError::Config(format!("obstacle.base: expected {n} values, got {}", ob.base.len())));
            }
            if ob.local_slope < 0.0 || ob.mean_slope < 0.0 || !finite(&ob.base) {
                return Err(GridError::Config("obstacle slopes must be nonnegative and data finite".into()));
            }
        }
        let growth = (0..n).map(|i| f.growth_bound(i, sub[i], sup[i])).collect();
        Ok(GridProblem { n, p, flux_weight, f, obstacle, sub, sup, growth })
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.h()
    }

    #[inline]
    pub fn flux(&self, xi: f64) -> f64 {
        if self.p == 2.0 {
            self.flux_weight * xi
        } else {
            self.flux_weight * xi.abs().powf(self.p - 1.0).copysign(xi)
        }
    }

    /// Obstacle values at parameter `v`, `+inf` without an obstacle.
    pub fn psi(&self, v: &[f64]) -> Vec<f64> {
        match &self.obstacle {
            Some(ob) => ob.eval(v),
            None => vec![f64::INFINITY; self.n],
        }
    }

    pub fn interval(&self, i: usize, s: f64, t: f64) -> (f64, f64) {
        self.f.interval(i, s, t)
    }

    /// Same problem with different sub/supersolution vectors.
    pub fn with_bounds(&self, sub: Vec<f64>, sup: Vec<f64>) -> Result<Self, GridError> {
        GridProblem::new(self.n, self.p, self.flux_weight, self.f.clone(), self.obstacle.clone(), sub, sup)
    }
}

/// `(E u)_i = -(phi((u_{i+1} - u_i)/h) - phi((u_i - u_{i-1})/h)) / h` with zero
/// boundary values.
pub fn apply_e(u: &[f64], prob: &GridProblem) -> Result<Vec<f64>, GridError> {
    if u.len() != prob.n {
        return Err(GridError::Config(format!("vector has {} entries, expected {}", u.len(), prob.n)));
    }
    if let Some(i) = u.iter().position(|x| !x.is_finite()) {
        return Err(GridError::Numeric(format!("non-finite input at node {i}")));
    }
    Ok(apply_e_unchecked(u, prob))
}

pub(crate) fn apply_e_unchecked(u: &[f64], prob: &GridProblem) -> Vec<f64> {
    let h = prob.h();
    let n = u.len();
    let at = |k: isize| if k < 0 || k as usize >= n { 0.0 } else { u[k as usize] };
    (0..n as isize)
        .map(|i| {
            let right = prob.flux((at(i + 1) - at(i)) / h);
            let left = prob.flux((at(i) - at(i - 1)) / h);
            -(right - left) / h
        })
        .collect()
}

/// Discrete pairing `h Σ a_i b_i`.
pub fn pairing(a: &[f64], b: &[f64], h: f64) -> f64 {
    h * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

/// `(h Σ |u_i|^p)^(1/p)`.
pub fn lp_norm(u: &[f64], p: f64, h: f64) -> f64 {
    (h * u.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
}

/// `(h Σ_{edges} |(u_{j+1} - u_j)/h|^p)^(1/p)` including both boundary edges.
pub fn gradient_norm(u: &[f64], p: f64, h: f64) -> f64 {
    let n = u.len();
    let at = |k: usize| if k == 0 || k > n { 0.0 } else { u[k - 1] };
    let sum: f64 = (0..=n).map(|j| ((at(j + 1) - at(j)) / h).abs().powf(p)).sum();
    (h * sum).powf(1.0 / p)
}
