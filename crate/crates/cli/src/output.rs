use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::UsageError;

/// Seventeen significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn prepare(dir: &Path) -> Result<(), UsageError> {
    fs::create_dir_all(dir).map_err(|e| UsageError::Io(format!("{}: {e}", dir.display())))
}

pub fn csv_writer(dir: &Path, name: &str) -> Result<(csv::Writer<File>, PathBuf), UsageError> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| UsageError::Io(format!("{}: {e}", path.display())))?;
    Ok((csv::Writer::from_writer(file), path))
}

pub fn write_summary<T: Serialize>(dir: &Path, summary: &T) -> Result<PathBuf, UsageError> {
    let path = dir.join("summary.json");
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| UsageError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }
}
