use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use transferability::harness::{
    load_runs, run_experiment, write_report, ConfigFile, ExperimentConfig, StatReport,
};
use transferability::landscape::{
    count_local_maxima, map_grid, render_heatmap_with_overlay, write_grid_csv, GridKind,
    Resolution, HIGH_FITNESS_MM,
};
use transferability::treatments::Treatment;

#[derive(Parser)]
#[command(
    name = "transferability",
    version,
    about = "Sim-to-real experiments with a learned transferability function"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map a quantity over the whole parameter square (CSV + SVG heatmap).
    Map {
        #[command(flatten)]
        common: Common,
        /// sim_fitness, real_fitness, disparity_fitness, disparity_trajectory or score.
        /// All kinds when omitted.
        #[arg(long)]
        kind: Option<GridKind>,
        /// Outline cells whose simulated fitness reaches this value (mm).
        #[arg(long, default_value_t = HIGH_FITNESS_MM)]
        threshold: f64,
    },
    /// Run the replicates of a single treatment.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        treatment: Treatment,
    },
    /// Run every configured treatment and compare them.
    Experiment {
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild summary, statistics and chart from persisted run records.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Key-value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Real-evaluation budget per run.
    #[arg(long)]
    budget: Option<usize>,
    /// Minimum predicted transferability for the final selection.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Map resolution, e.g. 75x75.
    #[arg(long)]
    resolution: Option<Resolution>,
    /// Switch off the real evaluator's noise.
    #[arg(long)]
    noise_free: bool,
    /// Override any config-file key, e.g. `--set generations=50`. The value
    /// uses the config file's syntax. Applied after the file, before the
    /// dedicated flags.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            ConfigFile::load(path)?.apply(&mut cfg)?;
        }
        for kv in &self.overrides {
            let (key, value) = kv
                .split_once('=')
                .with_context(|| format!("--set expects KEY=VALUE, got `{kv}`"))?;
            ConfigFile::parse(&format!("{} = {}", key.trim(), value.trim()))
                .and_then(|f| f.apply(&mut cfg))
                .with_context(|| format!("--set {kv}"))?;
        }
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.replicates {
            cfg.replicates = v;
        }
        if let Some(v) = self.budget {
            cfg.settings.budget = v;
        }
        if let Some(v) = self.tau {
            cfg.settings.tau = v;
        }
        if let Some(v) = &self.out {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = self.resolution {
            cfg.resolution = v;
        }
        if self.noise_free {
            cfg.noise_free = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Prints the comparison table. A closed stdout (e.g. piped into `head`)
/// is not an error.
fn print_report(report: &StatReport) {
    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "{:<18} {:>5} {:>10} {:>9} {:>10} {:>9} {:>9} {:>10}",
        "treatment", "runs", "mean_real", "sd_real", "mean_sim", "sd_sim", "t", "p"
    );
    for s in &report.treatments {
        let (t, p) = s
            .vs_transferability
            .map(|w| (format!("{:.3}", w.t), format!("{:.2e}", w.p)))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<18} {:>5} {:>10.1} {:>9.1} {:>10.1} {:>9.1} {:>9} {:>10}",
            s.treatment.name(),
            s.runs,
            s.mean_real,
            s.sd_real,
            s.mean_sim,
            s.sd_sim,
            t,
            p
        );
    }
}

fn map(cfg: &ExperimentConfig, kind: Option<GridKind>, threshold: f64) -> Result<()> {
    let testbed = cfg.effective_settings().testbed;
    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating {}", cfg.out_dir.display()))?;
    let sim = map_grid(
        GridKind::SimFitness,
        &testbed,
        cfg.resolution,
        cfg.master_seed,
    )?;
    let kinds = kind.map_or_else(|| GridKind::ALL.to_vec(), |k| vec![k]);
    for kind in kinds {
        let grid = if kind == GridKind::SimFitness {
            sim.clone()
        } else {
            map_grid(kind, &testbed, cfg.resolution, cfg.master_seed)?
        };
        let csv = cfg.out_dir.join(format!("map_{kind}.csv"));
        write_grid_csv(&grid, &csv)?;
        let svg = cfg.out_dir.join(format!("map_{kind}.svg"));
        fs::write(
            &svg,
            render_heatmap_with_overlay(&grid, Some((&sim, threshold))),
        )
        .with_context(|| format!("writing {}", svg.display()))?;
        println!(
            "{kind}: {} nodes, min {:.4}, max {:.4}, {} strict local maxima -> {}",
            grid.values.len(),
            grid.min(),
            grid.max(),
            count_local_maxima(&grid),
            csv.display()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Map {
            common,
            kind,
            threshold,
        } => map(&common.load()?, kind, threshold),
        Command::Run { common, treatment } => {
            let mut cfg = common.load()?;
            cfg.treatments = vec![treatment];
            print_report(&run_experiment(&cfg)?.report);
            Ok(())
        }
        Command::Experiment { common } => {
            print_report(&run_experiment(&common.load()?)?.report);
            Ok(())
        }
        Command::Report { common } => {
            let cfg = common.load()?;
            let (runs, report) = load_runs(&cfg.out_dir)?;
            write_report(&report, &runs, &cfg.out_dir)?;
            print_report(&report);
            Ok(())
        }
    }
}
