//! Scan configuration (TOML, or the JSON sidecar of an earlier run).

use std::path::Path;

use serde::{Deserialize, Serialize};
use vqse_core::pipeline::MethodOptions;

use crate::CliError;

/// Energy the error columns are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    #[default]
    FciFull,
    Ref,
}

/// Bond lengths (Å): an explicit list or an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

impl Grid {
    pub fn resolve(&self) -> Result<Vec<f64>, CliError> {
        let pts = match (&self.points, self.start, self.stop, self.step) {
            (Some(p), None, None, None) => p.clone(),
            (None, Some(a), Some(b), Some(h)) => {
                if !(h > 0.0) || !(b >= a) {
                    return Err(CliError::Config(format!("bad range {a}..{b} step {h}")));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                // rounded so that 0.1 steps print as written
                (0..=n)
                    .map(|k| ((a + k as f64 * h) * 1e10).round() / 1e10)
                    .collect()
            }
            _ => {
                return Err(CliError::Config(
                    "grid needs either `points` or all of `start`, `stop`, `step`".into(),
                ))
            }
        };
        if pts.is_empty() {
            return Err(CliError::Config("grid is empty".into()));
        }
        if pts.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(CliError::Config(
                "bond lengths must be positive and finite".into(),
            ));
        }
        if pts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(pts)
    }
}

/// A diatomic scan over the bond length, the single scan variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Output file stem; defaults to the config file's stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub atoms: [String; 2],
    pub grid: Grid,
    #[serde(default)]
    pub baseline: Baseline,
    #[serde(default)]
    pub method: MethodOptions,
}

/// What the JSON sidecar holds; `config` is fully resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub config: ScanConfig,
    pub points: Vec<vqse_core::pipeline::CurvePoint>,
}

impl ScanConfig {
    /// `.json` files may be a sidecar (its `config` is used) or a bare
    /// config; anything else is read as TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: ScanConfig = if path.extension().is_some_and(|e| e == "json") {
            let v: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let inner = v.get("config").cloned().unwrap_or(v);
            serde_json::from_value(inner)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        };
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }

    /// Explicit grid, checked partition-independent options.
    pub fn resolved(&self) -> Result<Self, CliError> {
        let mut out = self.clone();
        out.grid = Grid {
            points: Some(self.grid.resolve()?),
            ..Default::default()
        };
        let m = &self.method;
        if !(m.epsilon > 0.0 && m.epsilon < 1.0) {
            return Err(CliError::Config(format!(
                "epsilon {} outside (0, 1)",
                m.epsilon
            )));
        }
        if m.shots.is_some_and(|s| !(s > 0.0)) {
            return Err(CliError::Config("shots must be positive".into()));
        }
        if self.baseline == Baseline::FciFull && !m.full_fci {
            return Err(CliError::Config(
                "baseline fci_full needs method.full_fci = true".into(),
            ));
        }
        for a in &self.atoms {
            vqse_core::integrals::nuclear_charge(a).map_err(|e| CliError::Config(e.to_string()))?;
        }
        vqse_core::integrals::BasisSet::named(&m.basis)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(out)
    }
}
