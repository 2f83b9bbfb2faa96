use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::solver::DiagnosticsRow;

/// Scientific notation with 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Diagnostics as CSV with a fixed column order and `\n` line endings.
pub fn diagnostics_csv(rows: &[DiagnosticsRow]) -> Result<String> {
    let mut out = DiagnosticsRow::CSV_COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        let values = row.csv_values();
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NumericDomain(format!("non-finite diagnostic {v} at t = {}", row.t)));
        }
        let cells: Vec<String> = values.iter().map(|&v| format_number(v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    Ok(out)
}

/// Reads a diagnostics CSV back as `(times, column values)`.
pub fn read_column(text: &str, column: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Usage(format!("unreadable CSV header: {e}")))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Usage(format!("CSV has no column '{name}'")))
    };
    let t_col = find("t")?;
    let v_col = find(column)?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Usage(format!("CSV record {}: {e}", i + 1)))?;
        let parse = |col: usize| {
            record
                .get(col)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Usage(format!("CSV record {}: bad number in column {col}", i + 1)))
        };
        times.push(parse(t_col)?);
        values.push(parse(v_col)?);
    }
    Ok((times, values))
}

fn has_null(value: &Value) -> bool {
    match value {
        Value::Null => true,
        Value::Array(items) => items.iter().any(has_null),
        Value::Object(map) => map.values().any(has_null),
        _ => false,
    }
}

/// Pretty JSON of a report. Non-finite floats serialise to `null`, so any
/// `null` marks a non-finite number and is refused.
pub fn report_json(report: &impl Serialize) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| Error::Usage(format!("report serialisation: {e}")))?;
    if has_null(&value) {
        return Err(Error::NumericDomain("report contains a non-finite number".into()));
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::Usage(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64) -> DiagnosticsRow {
        DiagnosticsRow {
            t,
            l2_av: 1.0 / 3.0,
            linf_av: 2.0,
            besov0_21: 0.1,
            besov0_inf1: 1e-300,
            nl_l2: 0.0,
            nl_besov_inf1: 5e-12,
            weighted_sup: 7.25,
            energy: 1.0 / 9.0,
        }
    }

    #[test]
    fn csv_format_and_round_trip() {
        let text = diagnostics_csv(&[row(0.0), row(0.5)]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,l2_av,linf_av,besov0_21,besov0_inf1,nl_l2,nl_besov_inf1,weighted_sup"));
        assert!(lines.next().unwrap().starts_with("0.0000000000000000e0,3.3333333333333331e-1,"));
        assert!(!text.contains('\r') && text.ends_with('\n'));
        let (t, v) = read_column(&text, "l2_av").unwrap();
        assert_eq!(t, vec![0.0, 0.5]);
        assert_eq!(v, vec![1.0 / 3.0; 2]);
        assert!(read_column(&text, "missing").is_err());
    }

    #[test]
    fn non_finite_values_are_refused() {
        let mut bad = row(1.0);
        bad.linf_av = f64::NAN;
        assert!(matches!(diagnostics_csv(&[bad]), Err(Error::NumericDomain(_))));
        #[derive(Serialize)]
        struct Report {
            x: f64,
            ys: Vec<f64>,
        }
        assert!(report_json(&Report { x: 1.0, ys: vec![2.0] }).is_ok());
        assert!(matches!(report_json(&Report { x: 1.0, ys: vec![f64::INFINITY] }), Err(Error::NumericDomain(_))));
    }
}
