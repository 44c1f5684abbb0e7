//! CSV and JSON serialization.
//!
//! Floats in CSV use `{:.16e}` (17 significant digits, exact round trip for
//! binary64), rows end in `\n`, and negative zero is printed as zero.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use pt_liouville::{Cplx, SpectralDecomposition};
use serde_json::{json, Value};

use crate::CliError;

pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn complex_json(z: Cplx<f64>) -> Value {
    json!([z.re, z.im])
}

pub fn complex_list_json(zs: &[Cplx<f64>]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_json(z)).collect())
}

fn spectrum_order(a: &Cplx<f64>, b: &Cplx<f64>) -> Ordering {
    b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalue table with header `re,im`, sorted by real part descending then
/// imaginary part ascending.
pub fn format_spectrum_csv(values: &[Cplx<f64>]) -> Result<String, CliError> {
    if values.is_empty() {
        return Err(CliError::Unsupported("empty spectrum".into()));
    }
    let mut sorted: Vec<Cplx<f64>> = values.iter().map(|z| Cplx::new(z.re + 0.0, z.im + 0.0)).collect();
    sorted.sort_by(spectrum_order);
    let mut out = String::from("re,im\n");
    for z in sorted {
        let _ = writeln!(out, "{},{}", fmt_f64(z.re), fmt_f64(z.im));
    }
    Ok(out)
}

pub fn write_spectrum_csv(dec: &SpectralDecomposition<f64>, path: &Path) -> Result<(), CliError> {
    write_text(path, &format_spectrum_csv(&dec.eigenvalues)?)
}

/// Reads a table written by [`write_spectrum_csv`].
pub fn read_spectrum_csv(path: &Path) -> Result<Vec<Cplx<f64>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    if lines.next() != Some("re,im") {
        return Err(CliError::Parse(format!("{}: missing header re,im", path.display())));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || CliError::Parse(format!("{}: line {}", path.display(), i + 2));
            let (re, im) = line.split_once(',').ok_or_else(bad)?;
            Ok(Cplx::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
        })
        .collect()
}

/// Generic CSV with a header row; each row is already formatted.
pub fn format_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes JSON to `path`, or to stdout when no path is given.
pub fn emit_json(v: &Value, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => write_text(p, &json_text(v)),
        None => {
            print!("{}", json_text(v));
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_formats_as_spec_row() {
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-0.1), "-1.0000000000000001e-1");
    }

    #[test]
    fn csv_sorted_and_terminated() {
        let z = [Cplx::new(-0.2, 0.0), Cplx::new(-0.1, 1.0), Cplx::new(0.0, 0.0), Cplx::new(-0.1, -1.0)];
        let s = format_spectrum_csv(&z).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "re,im");
        assert!(lines[1].starts_with("0.0000000000000000e0,"));
        assert!(lines[2].ends_with("-1.0000000000000000e0"));
        assert!(s.ends_with('\n') && !s.contains('\r') && !s.contains(" \n"));
        assert!(format_spectrum_csv(&[]).is_err());
    }

    #[test]
    fn float_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
