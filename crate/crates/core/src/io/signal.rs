//! Plain-text signals: decimal numbers separated by whitespace or newlines.

use std::path::Path;

use super::{fmt_real, FormatError};

pub fn parse_signal(text: &str) -> Result<Vec<f64>, String> {
    let samples = text
        .split_whitespace()
        .enumerate()
        .map(|(i, tok)| {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("sample {}: not a number: {tok:?}", i + 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if samples.is_empty() {
        return Err("signal file holds no samples".into());
    }
    Ok(samples)
}

pub fn read_signal(path: &Path) -> Result<Vec<f64>, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_signal(&text).map_err(|m| FormatError::parse(path, m))
}

/// One sample per line.
pub fn write_signal(samples: &[f64], path: &Path) -> Result<(), FormatError> {
    let mut text = String::new();
    for &v in samples {
        text.push_str(&fmt_real(v));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| FormatError::io(path, e))
}
