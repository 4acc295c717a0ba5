use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vqse_cli::config::ScanConfig;
use vqse_cli::diff::{diff_curves, parse_curve};
use vqse_cli::{fcidump, scan, CliError};

#[derive(Parser)]
#[command(
    name = "vqse",
    version,
    about = "Potential-energy scans with virtual subspace expansion and orbital relaxation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a bond-length scan and write `<name>.csv` plus a JSON sidecar.
    Scan {
        /// TOML config, or the JSON sidecar of an earlier run.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        output: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Overrides `method.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare two scan CSVs column by column.
    Diff {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        a: PathBuf,
        b: PathBuf,
    },
    /// FCIDUMP conversion.
    Fcidump {
        #[command(subcommand)]
        action: FcidumpAction,
    },
}

#[derive(Subcommand)]
enum FcidumpAction {
    /// Write the RHF molecular-orbital integrals of a diatomic.
    Export {
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values = ["H", "H"])]
        atoms: Vec<String>,
        /// Bond length in ångström.
        #[arg(long)]
        bond: f64,
        #[arg(long, default_value = "sto-3g")]
        basis: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        charge: i32,
        /// Lowest orbitals folded into the scalar and one-body terms.
        #[arg(long, default_value_t = 0)]
        frozen_core: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Read an FCIDUMP and print a JSON summary with its FCI energy.
    Import { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Scan {
            config,
            output,
            threads,
            seed,
        } => {
            let mut cfg = ScanConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.method.seed = s;
            }
            if let Some(n) = threads {
                set_threads(n)?;
            }
            let result = scan::run_scan(&cfg)?;
            let (csv, json) = scan::write_outputs(&result, &output)?;
            let failed = scan::failures(&result.points);
            println!("wrote {} and {}", csv.display(), json.display());
            for p in &result.points {
                if let Err(e) = &p.result {
                    eprintln!("R = {}: {e}", p.bond_angstrom);
                }
            }
            if failed > 0 {
                eprintln!("{failed} of {} points failed", result.points.len());
                return Ok(1);
            }
            Ok(0)
        }
        Command::Diff { tol, a, b } => {
            if !(tol >= 0.0) {
                return Err(CliError::Usage("tolerance must be non-negative".into()));
            }
            let report = diff_curves(&parse_curve(&read(&a)?)?, &parse_curve(&read(&b)?)?, tol)?;
            print!("{}", report.render());
            Ok(u8::from(!report.violations.is_empty()))
        }
        Command::Fcidump { action } => match action {
            FcidumpAction::Export {
                atoms,
                bond,
                basis,
                charge,
                frozen_core,
                output,
            } => {
                let (ints, n_el) =
                    fcidump::export([&atoms[0], &atoms[1]], bond, &basis, charge, frozen_core)?;
                vqse_core::integrals::write_fcidump(&ints, n_el, (n_el % 2) as i32, &output)
                    .map_err(|e| CliError::Io(e.to_string()))?;
                println!(
                    "wrote {} ({} orbitals, {n_el} electrons)",
                    output.display(),
                    ints.n_spatial
                );
                Ok(0)
            }
            FcidumpAction::Import { file } => {
                let s = fcidump::import(&file)?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&s).map_err(|e| CliError::Io(e.to_string()))?
                );
                Ok(0)
            }
        },
    }
}

#[cfg(feature = "rayon")]
fn set_threads(n: usize) -> Result<(), CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

#[cfg(not(feature = "rayon"))]
fn set_threads(n: usize) -> Result<(), CliError> {
    if n > 1 {
        eprintln!("built without the rayon feature; running sequentially");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
