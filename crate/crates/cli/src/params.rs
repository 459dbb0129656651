//! `name = p/q` parameter files. `#` starts a comment.

use std::fs;
use std::path::Path;

use protogame::{ParamSet, Rational};

pub fn read(path: &Path) -> Result<ParamSet, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}:{e}", path.display()))
}

pub fn parse(text: &str) -> Result<ParamSet, String> {
    let mut params = ParamSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}: expected `name = p/q`", i + 1))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("{}: invalid parameter name '{name}'", i + 1));
        }
        let value: Rational = value
            .trim()
            .parse()
            .map_err(|e| format!("{}: {e}", i + 1))?;
        if params.insert(name, value).is_some() {
            return Err(format!("{}: '{name}' given twice", i + 1));
        }
    }
    Ok(params)
}
