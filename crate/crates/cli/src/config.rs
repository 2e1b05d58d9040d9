//! `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped, and a `#` after a value starts a comment.
pub fn parse_config(text: &str, origin: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Config {
            path: origin.to_string(),
            line: i + 1,
            message,
        };
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(format!("expected `key = value`, got {line:?}")));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            return Err(err("empty key".into()));
        }
        if value.is_empty() {
            return Err(err(format!("key `{key}` has no value")));
        }
        if out.insert(key.clone(), value.to_string()).is_some() {
            return Err(err(format!("key `{key}` given twice")));
        }
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::param("config", format!("{}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string())
}
