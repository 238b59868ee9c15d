//! Sweep tables as CSV.

use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::mor::SweepTable;

pub const SWEEP_HEADER: &str = "freq,h_abs,hk_abs,rel_err";

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.15e}")
    }
}

/// Header plus one row per point; undefined values (pole hits) print `nan`.
pub fn format_sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!("{},{},{},{}\n", num(r.freq), num(r.h_abs), num(r.hk_abs), num(r.rel_err)));
    }
    out
}

pub fn write_sweep_csv(table: &SweepTable, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_sweep_csv(table))?;
    Ok(())
}
