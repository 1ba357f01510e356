//! CSV emission and parse-back for aggregate results.

use std::io::Write;
use std::path::Path;

use crate::error::{Result, SimError};

use super::runner::AggregateRow;

pub const CSV_HEADER: &str =
    "scheme,sweep_name,sweep_value,mean_rate_bps_hz,mean_iul_dbm,max_iul_dbm,n_realizations,stderr";

fn fmt_num(v: f64) -> String {
    // 13 significant digits, parseable back exactly at emitted precision
    format!("{v:.12e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => fmt_num(x),
        None => "NA".to_string(),
    }
}

pub fn format_csv(rows: &[AggregateRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(SimError::InvalidParameter("no rows to emit".into()));
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.scheme,
            r.sweep_name,
            fmt_num(r.sweep_value),
            fmt_num(r.mean_rate_bps_hz),
            fmt_opt(r.mean_iul_dbm),
            fmt_opt(r.max_iul_dbm),
            r.n_realizations,
            fmt_num(r.stderr),
        ));
    }
    Ok(out)
}

pub fn emit_csv(rows: &[AggregateRow], path: &Path) -> Result<()> {
    let text = format_csv(rows)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .parse()
        .map_err(|_| SimError::Config(format!("line {line}: bad number '{field}'")))
}

fn parse_opt(field: &str, line: usize) -> Result<Option<f64>> {
    if field == "NA" {
        Ok(None)
    } else {
        parse_f64(field, line).map(Some)
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<AggregateRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(SimError::Config("missing or malformed CSV header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(SimError::Config(format!(
                "line {i}: expected 8 fields, got {}",
                fields.len()
            )));
        }
        rows.push(AggregateRow {
            scheme: fields[0].to_string(),
            sweep_name: fields[1].to_string(),
            sweep_value: parse_f64(fields[2], i)?,
            mean_rate_bps_hz: parse_f64(fields[3], i)?,
            mean_iul_dbm: parse_opt(fields[4], i)?,
            max_iul_dbm: parse_opt(fields[5], i)?,
            n_realizations: fields[6]
                .parse()
                .map_err(|_| SimError::Config(format!("line {i}: bad count '{}'", fields[6])))?,
            stderr: parse_f64(fields[7], i)?,
        });
    }
    Ok(rows)
}
