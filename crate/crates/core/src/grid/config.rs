use serde::{Deserialize, Serialize};

use super::solver::load_solution;
use super::{AffineObstacle, GridError, GridProblem, Jump, NodeValues, StepBifunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FluxKind {
    #[serde(rename = "p-laplacian")]
    PLaplacian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxSpec {
    pub kind: FluxKind,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for FluxSpec {
    fn default() -> Self {
        FluxSpec { kind: FluxKind::PLaplacian, weight: 1.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub offset: NodeValues,
    #[serde(default)]
    pub width: NodeValues,
    #[serde(default)]
    pub s_slope: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_jumps: Vec<Jump>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t_jumps: Vec<Jump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub base: NodeValues,
    #[serde(default)]
    pub local_slope: f64,
    #[serde(default)]
    pub mean_slope: f64,
}

/// How a sub- or supersolution vector is produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSpec {
    Constant(f64),
    Values(Vec<f64>),
    /// Solution of `E u = load` without obstacle.
    Load(f64),
}

impl BoundSpec {
    fn resolve(&self, n: usize, p: f64, weight: f64, field: &str) -> Result<Vec<f64>, GridError> {
        match self {
            BoundSpec::Constant(c) => Ok(vec![*c; n]),
            BoundSpec::Values(v) if v.len() == n => Ok(v.clone()),
            BoundSpec::Values(v) => Err(GridError::Config(format!("{field}: expected {n} values, got {}", v.len()))),
            BoundSpec::Load(load) => load_solution(n, p, weight, *load),
        }
    }
}

/// On-disk description of a grid problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub p: f64,
    #[serde(default)]
    pub flux: FluxSpec,
    pub f: FunctionSpec,
    #[serde(default)]
    pub obstacle: Option<ObstacleSpec>,
    pub sub: BoundSpec,
    #[serde(rename = "super")]
    pub sup: BoundSpec,
    /// Value levels for exhaustive search on tiny grids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<f64>>,
}

impl GridConfig {
    pub fn build(&self) -> Result<GridProblem, GridError> {
        let n = self.n;
        if n == 0 {
            return Err(GridError::Config("n must be positive".into()));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(GridError::Config(format!("p must lie in (1, inf), got {}", self.p)));
        }
        let f = StepBifunction {
            offset: self.f.offset.resolve(n, "f.offset")?,
            width: self.f.width.resolve(n, "f.width")?,
            s_slope: self.f.s_slope,
            s_jumps: self.f.s_jumps.clone(),
            t_jumps: self.f.t_jumps.clone(),
        };
        let obstacle = match &self.obstacle {
            Some(o) => Some(AffineObstacle {
                base: o.base.resolve(n, "obstacle.base")?,
                local_slope: o.local_slope,
                mean_slope: o.mean_slope,
            }),
            None => None,
        };
        let w = self.flux.weight;
        let sub = self.sub.resolve(n, self.p, w, "sub")?;
        let sup = self.sup.resolve(n, self.p, w, "super")?;
        GridProblem::new(n, self.p, w, f, obstacle, sub, sup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_config() {
        let json = r#"{
            "n": 3, "p": 2.0,
            "f": {"offset": -4.0, "t_jumps": [{"at": 0.5, "height": -4.0}]},
            "obstacle": {"base": 0.0, "local_slope": 1.0},
            "sub": {"constant": 0.0},
            "super": {"values": [1.0, 1.0, 1.0]}
        }"#;
        let c: GridConfig = serde_json::from_str(json).unwrap();
        let prob = c.build().unwrap();
        assert_eq!(prob.psi(&[0.2, 0.3, 0.4]), vec![0.2, 0.3, 0.4]);
        assert_eq!(prob.interval(1, 0.0, 0.5), (-8.0, -4.0));
        let again: GridConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_shapes() {
        let json =
            r#"{"n": 3, "p": 2.0, "f": {"offset": [1.0]}, "sub": {"constant": 0.0}, "super": {"constant": 1.0}}"#;
        let c: GridConfig = serde_json::from_str(json).unwrap();
        assert!(matches!(c.build(), Err(GridError::Config(_))));
        assert!(serde_json::from_str::<GridConfig>(
            r#"{"n": 3, "p": 2.0, "f": {}, "sub": {"constant": 0.0}, "super": {"constant": 1.0}, "extra": 1}"#
        )
        .is_err());
    }

    #[test]
    fn load_bounds_are_ordered() {
        let json = r#"{"n": 15, "p": 3.0, "f": {"offset": -1.0}, "sub": {"constant": 0.0}, "super": {"load": 2.0}}"#;
        let c: GridConfig = serde_json::from_str(json).unwrap();
        let prob = c.build().unwrap();
        assert!(prob.sup.iter().all(|&x| x > 0.0));
    }
}
