//! Batch runner for the OAM memory campaigns.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oam_memory::harness::{run_parallel, ExperimentConfig, ExperimentKind, Summary};
use oam_memory::{Error, Result};

const AFTER_HELP: &str = "\
Output files (CSV, header row first):
  scan      scan.csv      basis_id,beta_or_label,counts,background,acquisition_s
            scan_fit.csv  n0,delta,visibility,residual
  meridian  meridian.csv  gamma_w,gamma_r,n_l,n_r   (radians, counts)
  decay     decay.csv     t_s,eta,f_rel,f_abs,f_classical,band_low,band_high
  tomo      tomo_counts_K.csv  basis_id,beta_or_label,counts,background,acquisition_s
            rho_K.csv     row,col,re,im
            report.txt
  bounds    bounds.csv    t_s,eta,f_classical,band_low,band_high
  render    input.pgm/.dat, retrieved_K.pgm/.dat (x_m y_m intensity), hologram.pgm
Every run also writes manifest.json with SHA-256 hashes, config hash, seed and
RNG stream ids. K indexes storage_times.

Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.";

#[derive(Parser, Debug)]
#[command(name = "oamem", version, about = "Simulate storage of OAM qubits and qutrits in a cold-atom memory", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment config; defaults are used for anything omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config (default `out/<experiment>`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true, default_value_t = 0)]
    parallel: usize,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Interference scan along the equator.
    Scan,
    /// Polar-angle sweep along the meridian.
    Meridian,
    /// Fidelity and efficiency against storage time.
    Decay,
    /// State tomography at each storage time.
    Tomo,
    /// Classical limit and threshold band against storage time.
    Bounds,
    /// Intensity images of the input and retrieved fields.
    Render,
}

impl Command {
    fn kind(self) -> ExperimentKind {
        match self {
            Command::Scan => ExperimentKind::InterferenceScan,
            Command::Meridian => ExperimentKind::MeridianSweep,
            Command::Decay => ExperimentKind::StorageDecay,
            Command::Tomo => ExperimentKind::Tomography,
            Command::Bounds => ExperimentKind::BoundsTable,
            Command::Render => ExperimentKind::FieldRender,
        }
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let kind = cli.command.kind();
    let mut table = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            text.parse::<toml::Table>().map_err(|e| Error::Config(e.to_string()))?
        }
        None => toml::Table::new(),
    };
    match table.get("experiment").and_then(|v| v.as_str()) {
        Some(name) if name != kind.name() => {
            return Err(Error::Config(format!(
                "config is for `{name}`, subcommand runs `{}`",
                kind.name()
            )));
        }
        _ => {
            table.insert("experiment".into(), kind.name().into());
        }
    }
    if let Some(seed) = cli.seed {
        let seed = i64::try_from(seed).map_err(|_| Error::Config(format!("seed {seed} exceeds the TOML integer range")))?;
        table.insert("seed".into(), seed.into());
    }
    if !table.contains_key("seed") {
        return Err(Error::Config("a seed is required (config `seed` or --seed)".into()));
    }
    let mut cfg = ExperimentConfig::from_table(table)?;
    if let Some(out) = &cli.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<()> {
    let cfg = load(cli)?;
    let result = run_parallel(&cfg, cli.parallel)?;
    let dir = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(cfg.experiment.name()));
    result.write_to(&dir)?;
    match &result.summary {
        Summary::Scan { fit, .. } => println!("visibility {:.6}  delta {:.6}", fit.visibility, fit.delta),
        Summary::Decay(rows) => {
            for r in rows {
                println!(
                    "t_s {:>9.3e}  eta {:.4}  F_abs {:.4}  F_cl {:.4}  band [{:.4}, {:.4}]",
                    r.t_s, r.eta, r.f_abs, r.f_classical, r.band.0, r.band.1
                );
            }
        }
        _ => {}
    }
    eprintln!("wrote {} files to {}", result.outputs.len() + 1, dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
