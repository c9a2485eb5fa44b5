//! `key = value` configuration files. Flags always win over file entries.

use std::collections::BTreeMap;
use std::path::Path;

use crate::Failure;

pub fn parse_file(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_text(&text).map_err(|msg| Failure::usage(format!("{}: {msg}", path.display())))
}

/// One `key = value` pair per line; `#` starts a comment; blank lines are
/// skipped. Values are kept as strings and interpreted by the consumer
/// (`grid`, `swept`, `output` are reserved; anything else is a fixed
/// numeric parameter).
pub fn parse_text(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", lineno + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(format!("line {}: empty key or value", lineno + 1));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}
