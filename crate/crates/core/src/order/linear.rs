use num_rational::Rational64;
use num_traits::Zero;

use super::{Elem, ExtValue, ExtendedFunctional, FiniteLattice, OrderError};

/// A finite product grid `X_1 × … × X_n ⊂ Q^n` with the componentwise order.
///
/// Element ids are mixed-radix with the last coordinate varying fastest.
#[derive(Clone, Debug)]
pub struct GridLattice {
    lattice: FiniteLattice,
    points: Vec<Vec<Rational64>>,
}

impl GridLattice {
    pub fn new(mut axes: Vec<Vec<Rational64>>) -> Result<Self, OrderError> {
        if axes.is_empty() {
            return Err(OrderError::Malformed("grid needs at least one axis".into()));
        }
        for axis in &mut axes {
            axis.sort();
            axis.dedup();
            if axis.is_empty() {
                return Err(OrderError::Malformed("grid axis is empty".into()));
            }
        }
        let lattice = axes[1..].iter().fold(FiniteLattice::chain(axes[0].len()), |acc, axis| {
            FiniteLattice::product(&acc, &FiniteLattice::chain(axis.len()))
        });
        let mut points = vec![Vec::new()];
        for axis in &axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        Ok(GridLattice { lattice, points })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, e: Elem) -> &[Rational64] {
        &self.points[e.index()]
    }

    pub fn points(&self) -> &[Vec<Rational64>] {
        &self.points
    }
}

fn dot(a: &[Rational64], x: &[Rational64]) -> Rational64 {
    a.iter().zip(x).map(|(&c, &v)| c * v).sum()
}

/// The linear functional `u ↦ <coeffs, u>` restricted to the grid.
pub fn linear_functional(coeffs: &[Rational64], grid: &GridLattice) -> Result<ExtendedFunctional, OrderError> {
    if coeffs.len() != grid.dim() {
        return Err(OrderError::DimensionMismatch { left: coeffs.len(), right: grid.dim() });
    }
    ExtendedFunctional::new(grid.points.iter().map(|p| ExtValue::Finite(dot(coeffs, p))).collect())
}

/// Componentwise positive part `u ∨ 0`.
pub fn positive_part(u: &[Rational64]) -> Vec<Rational64> {
    u.iter().map(|&x| x.max(Rational64::zero())).collect()
}

/// `a ≼ b` for linear functionals on `Q^n`: true iff `a - b` is componentwise
/// nonnegative.
pub fn precsim_linear(a: &[Rational64], b: &[Rational64]) -> Result<bool, OrderError> {
    if a.len() != b.len() {
        return Err(OrderError::DimensionMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).all(|(x, y)| x >= y))
}

/// A multifunction from grid points to finite sets of linear functionals.
pub type LinearTable = Vec<Vec<Vec<Rational64>>>;

/// `<a - b, (u - w)^+> >= 0` for all `u, w` and `a ∈ A(u)`, `b ∈ A(w)`.
pub fn is_t_monotone(table: &LinearTable, grid: &GridLattice) -> bool {
    let n = grid.lattice.len();
    (0..n).all(|u| {
        (0..n).all(|w| {
            let diff: Vec<Rational64> = grid.points[u].iter().zip(&grid.points[w]).map(|(x, y)| x - y).collect();
            let plus = positive_part(&diff);
            table[u].iter().all(|a| {
                table[w].iter().all(|b| {
                    let ab: Vec<Rational64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    dot(&ab, &plus) >= Rational64::zero()
                })
            })
        })
    })
}
