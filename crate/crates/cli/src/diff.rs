//! Column-wise comparison of two scan CSV files.

use std::fmt::Write as _;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// The last `#` line holding commas is the header.
pub fn parse_curve(text: &str) -> Result<Curve, CliError> {
    let mut columns = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(h) = line.strip_prefix('#') {
            if h.contains(',') {
                columns = Some(
                    h.trim()
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .collect::<Vec<_>>(),
                );
            }
        } else if !line.trim().is_empty() {
            rows.push(
                line.split(',')
                    .map(|s| s.trim().to_string())
                    .collect::<Vec<_>>(),
            );
        }
    }
    let columns =
        columns.ok_or_else(|| CliError::Usage("no `#` header line naming the columns".into()))?;
    if let Some(r) = rows.iter().find(|r| r.len() != columns.len()) {
        return Err(CliError::Usage(format!(
            "row `{}` does not have {} cells",
            r.join(","),
            columns.len()
        )));
    }
    Ok(Curve { columns, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub name: String,
    pub compared: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Range of `B − A`.
    pub min_signed: f64,
    pub max_signed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    pub columns: Vec<ColumnStats>,
    /// Cells over tolerance, or present in one file only.
    pub violations: Vec<String>,
}

impl DiffReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:>5} {:>12} {:>12} {:>13} {:>13}",
            "column", "n", "max|B-A|", "mean|B-A|", "min(B-A)", "max(B-A)"
        );
        for c in &self.columns {
            let _ = writeln!(
                out,
                "{:<22} {:>5} {:>12.3e} {:>12.3e} {:>13.3e} {:>13.3e}",
                c.name, c.compared, c.max_abs, c.mean_abs, c.min_signed, c.max_signed
            );
        }
        for v in &self.violations {
            let _ = writeln!(out, "{v}");
        }
        out
    }
}

fn number(s: &str) -> Option<f64> {
    if s.is_empty() {
        None
    } else {
        s.parse().ok()
    }
}

/// Compares every numeric column of two curves on the same R grid.
/// A grid or header mismatch is a usage error.
pub fn diff_curves(a: &Curve, b: &Curve, tolerance: f64) -> Result<DiffReport, CliError> {
    if a.columns != b.columns {
        return Err(CliError::Usage(format!(
            "column headers differ: [{}] vs [{}]",
            a.columns.join(","),
            b.columns.join(",")
        )));
    }
    let grid = |c: &Curve| -> Result<Vec<f64>, CliError> {
        c.rows
            .iter()
            .map(|r| number(&r[0]).ok_or_else(|| CliError::Usage(format!("bad R cell `{}`", r[0]))))
            .collect()
    };
    let (ga, gb) = (grid(a)?, grid(b)?);
    if ga.len() != gb.len() || ga.iter().zip(&gb).any(|(x, y)| (x - y).abs() > 1e-9) {
        return Err(CliError::Usage("R grids differ".into()));
    }
    let mut columns = Vec::new();
    let mut violations = Vec::new();
    for (k, name) in a.columns.iter().enumerate().skip(1) {
        if name == "status" {
            continue;
        }
        let mut diffs = Vec::new();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            match (number(&ra[k]), number(&rb[k])) {
                (Some(x), Some(y)) => {
                    let d = y - x;
                    if !(d.abs() <= tolerance) {
                        violations.push(format!(
                            "R = {}, {name}: |B-A| = {:.3e} > {tolerance:e}",
                            ra[0],
                            d.abs()
                        ));
                    }
                    diffs.push(d);
                }
                (None, None) => {}
                (x, _) => violations.push(format!(
                    "R = {}, {name}: present only in {}",
                    ra[0],
                    if x.is_some() { "A" } else { "B" }
                )),
            }
        }
        let n = diffs.len();
        let mut stats = ColumnStats {
            name: name.clone(),
            compared: n,
            max_abs: 0.0,
            mean_abs: 0.0,
            min_signed: 0.0,
            max_signed: 0.0,
        };
        if n > 0 {
            stats.max_abs = diffs.iter().fold(0.0, |m, d| m.max(d.abs()));
            stats.mean_abs = diffs.iter().map(|d| d.abs()).sum::<f64>() / n as f64;
            stats.min_signed = diffs.iter().copied().fold(f64::INFINITY, f64::min);
            stats.max_signed = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        }
        columns.push(stats);
    }
    Ok(DiffReport {
        columns,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: &str = "# comment, with comma\n# R,E,status\n0.5,-1.0,ok\n0.7,-1.1,ok\n";

    #[test]
    fn file_against_itself_is_zero() {
        let c = parse_curve(A).unwrap();
        let r = diff_curves(&c, &c, 0.0).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.columns.len(), 1);
        assert_eq!(r.columns[0].max_abs, 0.0);
        assert_eq!(r.columns[0].compared, 2);
    }

    #[test]
    fn perturbed_cell_is_named() {
        let a = parse_curve(A).unwrap();
        let b = parse_curve(&A.replace("-1.1,", "-1.101,")).unwrap();
        let r = diff_curves(&a, &b, 1e-6).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert!(
            r.violations[0].starts_with("R = 0.7, E:"),
            "{}",
            r.violations[0]
        );
    }

    #[test]
    fn grid_mismatch_is_usage_error() {
        let a = parse_curve(A).unwrap();
        let b = parse_curve(&A.replace("0.7,", "0.8,")).unwrap();
        assert!(matches!(diff_curves(&a, &b, 1.0), Err(CliError::Usage(_))));
    }

    #[test]
    fn missing_cell_is_a_violation() {
        let a = parse_curve(A).unwrap();
        let b = parse_curve(&A.replace("-1.1,", ",")).unwrap();
        let r = diff_curves(&a, &b, 1.0).unwrap();
        assert!(r.violations[0].contains("present only in A"));
    }
}
