//! One numeric value per line. A single non-numeric first line is taken as
//! a header; blank lines and lines starting with `#` are skipped.

use std::path::Path;

use crate::error::{CliError, Result};

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(CliError::Input {
                    line: i + 1,
                    msg: format!("non-finite value {v}"),
                })
            }
            Err(_) if !seen_content => {}
            Err(_) => {
                return Err(CliError::Input {
                    line: i + 1,
                    msg: format!("'{line}' is not a number"),
                })
            }
        }
        seen_content = true;
    }
    if values.is_empty() {
        return Err(CliError::Input {
            line: 0,
            msg: "no values found".into(),
        });
    }
    Ok(values)
}

pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_values(&text)
}

pub fn format_values(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
