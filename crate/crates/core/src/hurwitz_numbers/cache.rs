use std::path::Path;

use super::{HurwitzError, HurwitzKey, HurwitzTable, Provenance};
use crate::exact_algebra::{format_rational, parse_rational};

/// One `r;g;mu_csv;num/den` line per entry, sorted.
pub fn render_cache(table: &HurwitzTable) -> String {
    let mut lines: Vec<String> = table
        .entries()
        .into_iter()
        .map(|(k, v)| {
            let mu: Vec<String> = k.mu.iter().map(|m| m.to_string()).collect();
            format!("{};{};{};{}", k.r, k.g, mu.join(","), format_rational(&v))
        })
        .collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

pub fn parse_cache(text: &str) -> Result<HurwitzTable, HurwitzError> {
    let table = HurwitzTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| HurwitzError::CorruptCache { line: i + 1, reason: reason.to_string() };
        let fields: Vec<&str> = line.split(';').collect();
        if fields.len() != 4 {
            return Err(bad("expected 4 fields"));
        }
        let r: u32 = fields[0].parse().map_err(|_| bad("bad r"))?;
        let g: u32 = fields[1].parse().map_err(|_| bad("bad g"))?;
        if r == 0 {
            return Err(bad("r must be positive"));
        }
        let mu: Vec<u32> = fields[2]
            .split(',')
            .map(|p| p.parse::<u32>().ok().filter(|&x| x > 0))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| bad("bad partition"))?;
        if mu.windows(2).any(|w| w[0] > w[1]) {
            return Err(bad("partition not sorted"));
        }
        let v = parse_rational(fields[3]).map_err(|_| bad("bad rational"))?;
        table
            .insert(HurwitzKey::new(r, g, mu), v, Provenance::Cache)
            .map_err(|_| bad("conflicting duplicate entry"))?;
    }
    Ok(table)
}

pub fn cache_store(table: &HurwitzTable, path: &Path) -> Result<(), HurwitzError> {
    std::fs::write(path, render_cache(table))?;
    Ok(())
}

pub fn cache_load(path: &Path) -> Result<HurwitzTable, HurwitzError> {
    parse_cache(&std::fs::read_to_string(path)?)
}
