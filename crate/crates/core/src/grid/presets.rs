//! Named grid configurations.

use super::{BoundSpec, FluxSpec, FunctionSpec, GridConfig, Jump, NodeValues, ObstacleSpec};

pub const NAMES: [&str; 7] = [
    "linear-load",
    "plain-obstacle",
    "p-laplacian-1.5",
    "p-laplacian-3",
    "quasi-obstacle",
    "step-bifunction",
    "quantized",
];

fn constant_f(value: f64) -> FunctionSpec {
    FunctionSpec { offset: NodeValues::Scalar(value), ..Default::default() }
}

fn obstacle(base: f64, local_slope: f64) -> Option<ObstacleSpec> {
    Some(ObstacleSpec { base: NodeValues::Scalar(base), local_slope, mean_slope: 0.0 })
}

fn config(
    name: &str,
    n: usize,
    p: f64,
    f: FunctionSpec,
    ob: Option<ObstacleSpec>,
    sub: BoundSpec,
    sup: BoundSpec,
) -> GridConfig {
    GridConfig { name: Some(name.into()), n, p, flux: FluxSpec::default(), f, obstacle: ob, sub, sup, levels: None }
}

pub fn preset(name: &str) -> Option<GridConfig> {
    Some(match name {
        "linear-load" => config(name, 31, 2.0, constant_f(-1.0), None, BoundSpec::Constant(0.0), BoundSpec::Load(2.0)),
        "plain-obstacle" => config(
            name,
            31,
            2.0,
            constant_f(-8.0),
            obstacle(0.1, 0.0),
            BoundSpec::Constant(0.0),
            BoundSpec::Constant(0.1),
        ),
        "p-laplacian-1.5" => {
            config(name, 31, 1.5, constant_f(-1.0), None, BoundSpec::Constant(0.0), BoundSpec::Load(2.0))
        }
        "p-laplacian-3" => {
            config(name, 31, 3.0, constant_f(-1.0), None, BoundSpec::Constant(0.0), BoundSpec::Load(2.0))
        }
        "quasi-obstacle" => config(
            name,
            31,
            2.0,
            constant_f(-8.0),
            obstacle(0.05, 0.5),
            BoundSpec::Constant(0.0),
            BoundSpec::Constant(0.1),
        ),
        "step-bifunction" => {
            let f = FunctionSpec { t_jumps: vec![Jump { at: 0.6, height: -8.0 }], ..constant_f(-4.0) };
            config(name, 15, 2.0, f, obstacle(0.3, 0.8), BoundSpec::Constant(0.0), BoundSpec::Load(13.0))
        }
        "quantized" => {
            let f = FunctionSpec { t_jumps: vec![Jump { at: 0.5, height: -4.0 }], ..constant_f(-4.0) };
            let mut c = config(name, 3, 2.0, f, obstacle(0.0, 1.0), BoundSpec::Constant(0.0), BoundSpec::Constant(1.0));
            c.levels = Some(vec![0.0, 0.25, 0.5, 0.75, 1.0]);
            c
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for name in NAMES {
            let c = preset(name).unwrap();
            assert_eq!(c.name.as_deref(), Some(name));
            c.build().unwrap();
        }
        assert!(preset("nope").is_none());
    }
}
