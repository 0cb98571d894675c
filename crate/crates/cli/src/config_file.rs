use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

/// Keys accepted in a config file; the same names as the long flags.
pub const KEYS: [&str; 13] = [
    "function", "dim", "agents", "iters", "seed", "bounds", "impl", "scope", "runs", "warmups",
    "reps", "out", "format",
];

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut values = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::usage(format!(
                "config line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        if value.is_empty() {
            return Err(CliError::usage(format!(
                "config line {}: empty value for `{key}`",
                lineno + 1
            )));
        }
        values.insert(key.to_string(), value.to_string());
    }
    Ok(values)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}
