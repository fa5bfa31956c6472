use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use contjack::bench::{
    run_experiment, run_simulation, write_curve_csv, ExperimentSpec, SimulationRun,
};
use contjack::config::TournamentConfig;
use contjack::equilibrium::{
    nash_threshold, nash_thresholds, rational_bound, rational_upper_bound, simple_threshold_bound,
    simple_threshold_upper_bound, stable_upper_table, SolverOptions, TableKind, ThresholdTable,
};
use contjack::strategies::{Bandit, ModelFree};
use contjack::Error;

#[derive(Parser)]
#[command(
    name = "contjack",
    version,
    about = "Continuous blackjack: equilibrium tables and learning tournaments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Threshold table for n = 1..n_max opponents.
    Tables {
        /// nash, simple_upper, rational_upper or stable_upper
        kind: String,
        n_max: usize,
        /// Stability constant (stable_upper only).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run a tournament described by a TOML config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Independent runs with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Result file (defaults to output.result in the config, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// alpha_n, beta_n, gamma_n side by side for n = 1..14.
    FigureData {
        #[arg(default_value = "cmp")]
        kind: String,
        #[arg(long, default_value_t = 14)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Process exit status for each failure class.
fn exit_code(e: &Error) -> u8 {
    if e.is_io() {
        3
    } else if e.is_numerical() || matches!(e, Error::InvalidThreshold { .. } | Error::Aborted(_)) {
        2
    } else {
        1
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_tables(
    kind: &str,
    n_max: usize,
    c: Option<f64>,
    out: Option<&Path>,
    format: Format,
) -> Result<(), Error> {
    let kind: TableKind = kind.parse()?;
    let table: ThresholdTable = match kind {
        TableKind::Nash => nash_thresholds(n_max)?,
        TableKind::SimpleUpper => simple_threshold_upper_bound(n_max)?,
        TableKind::RationalUpper => rational_upper_bound(n_max)?,
        TableKind::StableUpper => {
            let c = c.ok_or_else(|| Error::Config("stable_upper requires --c".into()))?;
            stable_upper_table(n_max, c)?
        }
    };
    let mut w = open_out(out)?;
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &table)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_figure_data(kind: &str, n_max: usize, out: Option<&Path>) -> Result<(), Error> {
    if kind != "cmp" {
        return Err(Error::Config(format!(
            "unknown figure `{kind}` (expected cmp)"
        )));
    }
    let opts = SolverOptions::default();
    let mut w = open_out(out)?;
    writeln!(w, "n,alpha,beta,gamma")?;
    for n in 1..=n_max {
        let (a, b, g) = (
            nash_threshold(n, &opts)?,
            simple_threshold_bound(n, &opts)?,
            rational_bound(n, &opts)?,
        );
        writeln!(w, "{n},{a},{b},{g}")?;
    }
    w.flush()?;
    Ok(())
}

fn export_learners(run: &SimulationRun, dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    for (id, p) in run.players.iter().enumerate() {
        if let Some(mf) = p.as_any().downcast_ref::<ModelFree>() {
            let f = BufWriter::new(File::create(dir.join(format!("player{id}_model.csv")))?);
            mf.model().write_csv(f)?;
        } else if let Some(b) = p.as_any().downcast_ref::<Bandit>() {
            let mut f = BufWriter::new(File::create(dir.join(format!("player{id}_bandit.json")))?);
            serde_json::to_writer_pretty(&mut f, &b.export())?;
            writeln!(f)?;
            f.flush()?;
        }
    }
    Ok(())
}

fn write_metrics_csv(runs: &[SimulationRun], w: &mut dyn Write) -> Result<(), Error> {
    writeln!(
        w,
        "seed,player_id,label,total_points,mean_reward,std_error,s,r"
    )?;
    for run in runs {
        for p in &run.report.players {
            let r = p.r.map(|r| r.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                run.result.seed, p.id, p.label, p.total_points, p.mean_reward, p.std_error, p.s, r
            )?;
        }
    }
    Ok(())
}

fn cmd_simulate(
    config: &Path,
    seed: Option<u64>,
    replicates: u64,
    jobs: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<(), Error> {
    let mut cfg = TournamentConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let runs = if replicates <= 1 {
        let mut log_file = match &cfg.output.round_log {
            Some(p) => {
                if cfg.log.round_log_every == 0 {
                    cfg.log.round_log_every = 1;
                }
                Some(BufWriter::new(File::create(p)?))
            }
            None => None,
        };
        let run = run_simulation(&cfg, log_file.as_mut().map(|w| w as &mut dyn Write))?;
        if let Some(mut f) = log_file {
            f.flush()?;
        }
        vec![run]
    } else {
        let seeds = (0..replicates).map(|k| cfg.seed.wrapping_add(k)).collect();
        run_experiment(&ExperimentSpec {
            config: cfg.clone(),
            seeds,
            jobs,
        })?
    };

    for run in &runs {
        let suffix = if runs.len() > 1 {
            format!("_seed{}", run.result.seed)
        } else {
            String::new()
        };
        if let Some(p) = &cfg.output.curve {
            let path = with_suffix(p, &suffix);
            write_curve_csv(&run.curve, BufWriter::new(File::create(path)?))?;
        }
        if let Some(dir) = &cfg.output.models_dir {
            export_learners(run, &dir.join(format!("seed{}", run.result.seed)))?;
        }
    }

    let out = out.or(cfg.output.result.as_deref());
    let mut w = open_out(out)?;
    match format {
        Format::Json => {
            let summaries: Vec<_> = runs.iter().map(SimulationRun::summary).collect();
            if summaries.len() == 1 {
                serde_json::to_writer_pretty(&mut w, &summaries[0])?;
            } else {
                serde_json::to_writer_pretty(&mut w, &summaries)?;
            }
            writeln!(w)?;
        }
        Format::Csv => write_metrics_csv(&runs, &mut w)?,
    }
    w.flush()?;

    if let Some(run) = runs.iter().find(|r| r.result.is_partial()) {
        let why = run.result.aborted.clone().unwrap_or_default();
        log::error!("seed {} stopped early: {why}", run.result.seed);
        return Err(Error::Aborted(format!("seed {}: {why}", run.result.seed)));
    }
    Ok(())
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    if suffix.is_empty() {
        return p.to_path_buf();
    }
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match p.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}{suffix}.{ext}"),
        None => format!("{stem}{suffix}"),
    };
    p.with_file_name(name)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CONTJACK_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let res = match &cli.command {
        Command::Tables {
            kind,
            n_max,
            c,
            out,
            format,
        } => cmd_tables(kind, *n_max, *c, out.as_deref(), *format),
        Command::Simulate {
            config,
            seed,
            replicates,
            jobs,
            out,
            format,
        } => cmd_simulate(config, *seed, *replicates, *jobs, out.as_deref(), *format),
        Command::FigureData { kind, n_max, out } => cmd_figure_data(kind, *n_max, out.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
