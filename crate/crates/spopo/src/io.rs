//! Text formats: two-column spectra, CSV tables and the dense matrix dump.
//! Numbers are written in scientific notation with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use spopo_core::{CouplingMatrix, SupermodeSet};

use crate::error::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses `index amplitude` lines (whitespace separated, `#` starts a comment)
/// into amplitudes ordered `-M..=M`. Every index in that range must appear once.
pub fn parse_spectrum(text: &str) -> Result<Vec<f64>, String> {
    let mut entries: Vec<(i64, f64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(idx), Some(amp), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(format!("line {}: expected two columns", lineno + 1));
        };
        let idx: i64 = idx
            .parse()
            .map_err(|_| format!("line {}: bad index `{idx}`", lineno + 1))?;
        let amp: f64 = amp
            .parse()
            .map_err(|_| format!("line {}: bad amplitude `{amp}`", lineno + 1))?;
        entries.push((idx, amp));
    }
    if entries.is_empty() {
        return Err("no data lines".into());
    }
    entries.sort_by_key(|e| e.0);
    let half = entries.last().map(|e| e.0).unwrap_or(0);
    if entries[0].0 != -half || entries.len() as i64 != 2 * half + 1 {
        return Err(format!(
            "indices must cover -{half}..={half} exactly once (found {} lines from {} to {})",
            entries.len(),
            entries[0].0,
            half
        ));
    }
    if entries.windows(2).any(|p| p[1].0 != p[0].0 + 1) {
        return Err("duplicate or missing index".into());
    }
    Ok(entries.into_iter().map(|e| e.1).collect())
}

pub fn read_spectrum(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_spectrum(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// CSV with a header row.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Table of `k, Λ_k, λ_k⁺, λ_k⁻`.
pub fn eigenvalue_table(set: &SupermodeSet, plus: &[f64], minus: &[f64]) -> String {
    csv(
        &["k", "lambda", "rate_plus", "rate_minus"],
        (0..set.len()).map(|k| {
            vec![
                k.to_string(),
                fmt_f64(set.eigenvalue(k)),
                fmt_f64(plus[k]),
                fmt_f64(minus[k]),
            ]
        }),
    )
}

/// `m, L_{k,m}` for one supermode.
pub fn supermode_table(set: &SupermodeSet, k: usize) -> String {
    let window = set.window();
    csv(
        &["m", "amplitude"],
        set.eigenvector(k)
            .iter()
            .enumerate()
            .map(|(i, v)| vec![window.index_at(i).to_string(), fmt_f64(*v)]),
    )
}

/// Row-major dump, one matrix row per line, space separated.
pub fn matrix_dump(coupling: &CouplingMatrix) -> String {
    let mut out = String::new();
    for i in 0..coupling.dim() {
        let row: Vec<String> = coupling.row(i).iter().map(|v| fmt_f64(*v)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses a CSV produced by [`csv`] back into its header and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or("empty csv")?
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("{c}: {e}")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}
