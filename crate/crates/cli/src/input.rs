//! CSV inputs and the `key = value` config file.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// p-values with optional ids, read from `id,p` or single-column `p` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueFile {
    pub ids: Option<Vec<String>>,
    pub values: Vec<f64>,
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

/// Rows as `(line, fields)`, skipping a header whose last field is not a number.
fn rows(path: &Path) -> Result<Vec<(u64, Vec<String>)>> {
    let mut out = Vec::new();
    let mut first = true;
    for (k, rec) in reader(path)?.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        let header = first && fields.last().is_some_and(|f| f.parse::<f64>().is_err());
        first = false;
        if !header {
            out.push((line, fields));
        }
    }
    Ok(out)
}

fn number(path: &Path, line: u64, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .with_context(|| format!("{}:{line}: {field:?} is not a number", path.display()))
}

pub fn read_pvalues(path: &Path) -> Result<PValueFile> {
    let rows = rows(path)?;
    if rows.is_empty() {
        bail!("{}: no p-values", path.display());
    }
    let width = rows[0].1.len();
    if width > 2 {
        bail!(
            "{}:{}: expected columns id,p or p",
            path.display(),
            rows[0].0
        );
    }
    let mut ids = Vec::new();
    let mut values = Vec::new();
    for (line, fields) in &rows {
        if fields.len() != width {
            bail!(
                "{}:{line}: expected {width} column(s), found {}",
                path.display(),
                fields.len()
            );
        }
        let p = number(path, *line, &fields[width - 1])?;
        if !(0.0..=1.0).contains(&p) {
            bail!("{}:{line}: p-value {p} is outside [0, 1]", path.display());
        }
        if width == 2 {
            ids.push(fields[0].clone());
        }
        values.push(p);
    }
    Ok(PValueFile {
        ids: (width == 2).then_some(ids),
        values,
    })
}

/// One number per row, for custom deltas.
pub fn read_numbers(path: &Path) -> Result<Vec<f64>> {
    rows(path)?
        .iter()
        .map(|(line, fields)| {
            if fields.len() != 1 {
                bail!("{}:{line}: expected a single column", path.display());
            }
            number(path, *line, &fields[0])
        })
        .collect()
}

/// `key = value` lines; `#` starts a comment. Keys use the flag spelling.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key = value", path.display(), k + 1);
        };
        let key = key.trim().trim_start_matches("--").to_string();
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            bail!("{}:{}: empty key", path.display(), k + 1);
        }
        out.push((key, value));
    }
    Ok(out)
}
