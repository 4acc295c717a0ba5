use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use vqse_core::pipeline::{vqse_energy_curve, CurvePoint, PointResult};

use crate::config::{Baseline, ScanConfig, Sidecar};
use crate::CliError;

pub const COLUMNS: [&str; 9] = [
    "R_angstrom",
    "E_ref_hartree",
    "E_vqse_hartree",
    "E_oo_hartree",
    "E_fci_full_hartree",
    "err_ref_hartree",
    "err_vqse_hartree",
    "err_oo_hartree",
    "status",
];

/// Runs every grid point of an already resolved config. Rows come back in
/// grid order whatever order the points finished in.
pub fn run_scan(config: &ScanConfig) -> Result<Sidecar, CliError> {
    let config = config.resolved()?;
    let grid = config.grid.points.clone().unwrap_or_default();
    let atoms = (config.atoms[0].as_str(), config.atoms[1].as_str());
    let points = vqse_energy_curve(atoms, &grid, &config.method);
    Ok(Sidecar { config, points })
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.12}"),
        Some(_) => "nan".into(),
        None => String::new(),
    }
}

fn baseline_of(p: &PointResult, b: Baseline) -> Option<f64> {
    match b {
        Baseline::FciFull => p.e_fci_full,
        Baseline::Ref => Some(p.e_ref),
    }
}

pub fn render_csv(s: &Sidecar) -> String {
    let c = &s.config;
    let m = &c.method;
    let mut out = String::new();
    let base = match c.baseline {
        Baseline::FciFull => "E_fci_full",
        Baseline::Ref => "E_ref",
    };
    let _ = writeln!(
        out,
        "# {}-{} scan, basis {}, errors are E - {base}; lengths in angstrom, energies in hartree",
        c.atoms[0], c.atoms[1], m.basis
    );
    let _ = writeln!(out, "# {}", COLUMNS.join(","));
    for p in &s.points {
        let row = match &p.result {
            Ok(r) => {
                let b = baseline_of(r, c.baseline);
                let err = |e: Option<f64>| cell(e.zip(b).map(|(x, y)| x - y));
                [
                    format!("{:.6}", p.bond_angstrom),
                    cell(Some(r.e_ref)),
                    cell(r.e_vqse),
                    cell(r.e_oo),
                    cell(r.e_fci_full),
                    err(Some(r.e_ref)),
                    err(r.e_vqse),
                    err(r.e_oo),
                    "ok".into(),
                ]
            }
            Err(e) => {
                let mut row: [String; 9] = Default::default();
                row[0] = format!("{:.6}", p.bond_angstrom);
                row[8] = format!("failed: {}", e.replace([',', '\n'], ";"));
                row
            }
        };
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn write_outputs(s: &Sidecar, dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let stem = s.config.name.clone().unwrap_or_else(|| "scan".into());
    let csv = dir.join(format!("{stem}.csv"));
    let json = dir.join(format!("{stem}.json"));
    std::fs::write(&csv, render_csv(s))
        .map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))?;
    let text = serde_json::to_string_pretty(s).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(&json, text + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", json.display())))?;
    Ok((csv, json))
}

pub fn failures(points: &[CurvePoint]) -> usize {
    points.iter().filter(|p| p.result.is_err()).count()
}
