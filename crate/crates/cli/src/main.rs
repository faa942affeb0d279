use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cutclass::theory::verify_thm1;
use cutclass::RunTrace;
use cutclass_cli::{run_experiment, worker_count, AggregateReport, CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "cutclass", version, about = "Batched derivative-free optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every method and replicate of an experiment config.
    Run { config: PathBuf },
    /// Recompute aggregate.csv from the traces in an experiment directory.
    Aggregate { dir: PathBuf },
    /// Check the round-by-round lower bound on a finite-space trace; prints JSON.
    ValidateTheory {
        trace: PathBuf,
        /// Index of the point to track; defaults to the optimum in the header.
        #[arg(long)]
        x_star: Option<usize>,
    },
    /// Write method, round, median, q25, q75 from an aggregate report.
    PlotData {
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn say(text: impl std::fmt::Display) -> Result<(), CliError> {
    match writeln!(std::io::stdout(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<std::fs::File>, CliError> {
    Ok(BufWriter::new(std::fs::File::create(path)?))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let outcome = run_experiment(&cfg, worker_count()?)?;
            for f in &outcome.failures {
                eprintln!("warning: {} replicate {} kept as a partial trace: {}", f.method, f.replicate, f.message);
            }
            say(outcome.aggregate_path.display())?;
        }
        Command::Aggregate { dir } => {
            let report = AggregateReport::from_dir(&dir)?;
            let path = dir.join("aggregate.csv");
            report.write_csv(create(&path)?)?;
            say(path.display())?;
        }
        Command::ValidateTheory { trace, x_star } => {
            let f = std::fs::File::open(&trace)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", trace.display())))?;
            let tr = RunTrace::read_jsonl(std::io::BufReader::new(f))?;
            let report = verify_thm1(&tr, x_star)?;
            say(serde_json::to_string_pretty(&report)?)?;
        }
        Command::PlotData { report, out } => {
            let f = std::fs::File::open(&report)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", report.display())))?;
            AggregateReport::read_csv(f)?.write_plot_csv(create(&out)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
