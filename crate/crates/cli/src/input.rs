use std::path::Path;

use subpoint_core::extremal::ExtremalConfig;
use subpoint_core::grid::presets::{preset, NAMES};
use subpoint_core::grid::{GridConfig, GridProblem};

use crate::{SolveArgs, UsageError};

/// Reads a config file, or falls back to a built-in preset of that name.
pub fn load_config(input: &str) -> Result<GridConfig, UsageError> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| UsageError::Io(format!("{input}: {e}")))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        return serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let at = if field == "." { "top level".to_string() } else { format!("field `{field}`") };
            UsageError::Config(format!("{input}: {at}: {}", e.inner()))
        });
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(input);
    preset(input)
        .or_else(|| preset(stem))
        .ok_or_else(|| UsageError::Config(format!("{input}: no such file or preset (presets: {})", NAMES.join(", "))))
}

pub fn build(config: &GridConfig) -> Result<GridProblem, UsageError> {
    config.build().map_err(|e| UsageError::Config(e.to_string()))
}

pub fn extremal_config(args: &SolveArgs) -> Result<ExtremalConfig, UsageError> {
    let mut cfg = match args.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            return Err(UsageError::Config(format!("--tol must be positive, got {t}")));
        }
        Some(t) => ExtremalConfig::with_tol(t),
        None => ExtremalConfig::default(),
    };
    if let Some(m) = args.max_iter {
        cfg.solver.max_iter = m;
    }
    if let Some(m) = args.max_outer {
        cfg.max_outer = m;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_and_file_stems_resolve() {
        assert_eq!(load_config("quantized").unwrap().n, 3);
        assert_eq!(load_config("missing-dir/plain-obstacle.json").unwrap().p, 2.0);
        assert!(matches!(load_config("nothing"), Err(UsageError::Config(_))));
    }

    fn args(tol: Option<f64>) -> SolveArgs {
        SolveArgs {
            input: String::new(),
            tol,
            max_iter: Some(17),
            max_outer: None,
            seed: 0,
            common: crate::Common { out: "out".into() },
        }
    }

    #[test]
    fn overrides_reach_the_solver() {
        let cfg = extremal_config(&args(Some(1e-8))).unwrap();
        assert_eq!(cfg.outer_tol, 1e-8);
        assert_eq!(cfg.solver.max_iter, 17);
        assert!(extremal_config(&args(Some(f64::NAN))).is_err());
    }
}
