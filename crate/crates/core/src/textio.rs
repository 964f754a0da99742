//! Text-artifact helpers shared by the CSV and SVG emitters.

use std::io::Write;
use std::path::Path;

use crate::error::Error;

/// Formats a float with 17 significant digits — enough to round-trip any
/// `f64` exactly — using the sentinel `nan` (lowercase) for missing values.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Writes `content` to `path`, attaching the path to any I/O error.
pub fn write_text(path: &Path, content: &str) -> Result<(), Error> {
    let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(content.as_bytes()).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
