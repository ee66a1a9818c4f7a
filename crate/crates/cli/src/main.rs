//! `cvgate`: regenerate the gate-noise, fidelity and verification tables.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cvgate::experiments::{self, Experiment, ExperimentConfig, InputKind, Sweep};

/// Directory used for `<experiment>.csv` when `--out` is not given.
const OUT_DIR_ENV: &str = "CVGATE_OUT_DIR";

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "cvgate", version, about = "EPR-driven squeezing and Fourier gate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Output noise vs amplitude-squeezing target, EPR vs cluster resource
    Fig2(Common),
    /// Phase-squeezing gate noise for vacuum and p-modulated inputs
    Fig3(Common),
    /// Fidelity vs phase-squeezing target
    Fig4(Common),
    /// Fourier gate LO-phase sweeps
    Fig5(Common),
    /// Cascaded squeeze + Fourier gate over theta1
    Cascade(Common),
    /// Homodyne angle table
    Angles(Common),
    /// Monte Carlo check of the analytic engine (exit 2 on any failure)
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// EPR resource squeezing in dB (<= 0)
    #[arg(long, allow_hyphen_values = true)]
    resource_db: Option<f64>,
    /// Cluster resource squeezing in dB (<= 0)
    #[arg(long, allow_hyphen_values = true)]
    cluster_resource_db: Option<f64>,
    /// Sweep grid as min:max:steps
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Input state: vacuum, coherent or modulated
    #[arg(long)]
    input: Option<String>,
    /// Amplitude modulation above shot noise, dB
    #[arg(long, allow_hyphen_values = true)]
    mod_x_db: Option<f64>,
    /// Phase modulation above shot noise, dB
    #[arg(long, allow_hyphen_values = true)]
    mod_p_db: Option<f64>,
    /// Coherent input means as x,p
    #[arg(long, allow_hyphen_values = true)]
    coherent_mean: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Restrict cascade/verify to a single theta1 (degrees)
    #[arg(long, allow_hyphen_values = true)]
    theta1_deg: Option<f64>,
    /// Scale the sampled feedforward gain (verify only; negative control)
    #[arg(long)]
    fault_gain: Option<f64>,
    /// Output CSV path (default: stdout, or $CVGATE_OUT_DIR/<experiment>.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script for the table to this path
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

impl Command {
    fn split(&self) -> (Experiment, &Common) {
        match self {
            Command::Fig2(c) => (Experiment::Fig2, c),
            Command::Fig3(c) => (Experiment::Fig3, c),
            Command::Fig4(c) => (Experiment::Fig4, c),
            Command::Fig5(c) => (Experiment::Fig5, c),
            Command::Cascade(c) => (Experiment::Cascade, c),
            Command::Angles(c) => (Experiment::Angles, c),
            Command::Verify(c) => (Experiment::Verify, c),
        }
    }
}

fn resolve(experiment: Experiment, args: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::defaults(experiment);
    if let Some(v) = args.resource_db {
        cfg.resource_db = v;
    }
    if let Some(v) = args.cluster_resource_db {
        cfg.cluster_resource_db = v;
    }
    if let Some(s) = &args.sweep {
        cfg.sweep = Some(s.parse::<Sweep>()?);
    }
    if let Some(s) = &args.input {
        cfg.input_kind = s.parse::<InputKind>()?;
    }
    if let Some(v) = args.mod_x_db {
        cfg.modulation_x_db = v;
    }
    if let Some(v) = args.mod_p_db {
        cfg.modulation_p_db = v;
    }
    if let Some(s) = &args.coherent_mean {
        let (x, p) = s
            .split_once(',')
            .context("--coherent-mean expects x,p")?;
        cfg.coherent_mean = (x.trim().parse()?, p.trim().parse()?);
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if args.theta1_deg.is_some() {
        cfg.theta1_deg = args.theta1_deg;
    }
    if let Some(v) = args.fault_gain {
        anyhow::ensure!(
            experiment == Experiment::Verify,
            "--fault-gain is only accepted by verify"
        );
        cfg.fault_gain = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output_path(experiment: Experiment, args: &Common) -> Option<PathBuf> {
    args.out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{experiment}.csv")))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (experiment, args) = cli.command.split();
    let cfg = match resolve(experiment, args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("cvgate: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match execute(&cfg, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("cvgate: verification failed");
            ExitCode::from(EXIT_VERIFY_FAILED)
        }
        Err(e) => {
            eprintln!("cvgate: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// Runs the experiment and writes its outputs; `Ok(false)` means a
/// verification check failed.
fn execute(cfg: &ExperimentConfig, args: &Common) -> Result<bool> {
    let table = experiments::run(cfg)?;
    let csv = table.to_csv();
    let path = output_path(cfg.experiment, args);
    match &path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
        }
        None => io::stdout().write_all(csv.as_bytes())?,
    }
    if let Some(script) = &args.plot_script {
        let data = path
            .as_ref()
            .map_or_else(|| format!("{}.csv", cfg.experiment), |p| p.display().to_string());
        fs::write(script, table.gnuplot_script(&data))
            .with_context(|| format!("writing {}", script.display()))?;
    }
    Ok(cfg.experiment != Experiment::Verify || experiments::verify_passed(&table))
}
