//! Replicate orchestration: one trace file per (method, replicate), then the
//! aggregate after every run has finished.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use cutclass::{run_classify_opt, run_random, run_random2x, RunFailure, RunTrace, SeedPolicy};

use crate::aggregate::AggregateReport;
use crate::config::{ExperimentConfig, MethodConfig, MethodKind};
use crate::problem::Problem;
use crate::CliError;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "CUTCLASS_WORKERS";

#[derive(Debug)]
pub struct ReplicateFailure {
    pub method: String,
    pub replicate: usize,
    pub message: String,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub report: AggregateReport,
    pub failures: Vec<ReplicateFailure>,
    pub aggregate_path: PathBuf,
}

/// Worker count from the environment, defaulting to the available parallelism.
pub fn worker_count() -> Result<usize, CliError> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config(format!("{WORKERS_ENV}={s:?} is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, usize::from)),
    }
}

pub fn trace_path(dir: &Path, method: &str, replicate: usize) -> PathBuf {
    dir.join("traces").join(method).join(format!("rep-{replicate:02}.jsonl"))
}

/// Runs one method on one replicate; the seed is `base_seed + replicate`.
pub fn run_replicate(
    exp: &ExperimentConfig,
    method: &MethodConfig,
    problem: &Problem,
    replicate: usize,
) -> Result<RunTrace, RunFailure> {
    let seed = SeedPolicy::new(exp.base_seed, replicate as u64);
    let obj = problem.objective.as_ref();
    let result = match method.kind {
        MethodKind::Random => run_random(obj, &problem.space, exp.batch_size, exp.rounds, seed),
        MethodKind::Random2x => run_random2x(obj, &problem.space, exp.batch_size, exp.rounds, seed),
        _ => {
            let cfg = method.optimizer(exp).expect("classifier method");
            run_classify_opt(problem.objective.clone(), &problem.space, &cfg, seed)
        }
    };
    let stamp = |tr: &mut RunTrace| {
        tr.header.method = method.name();
        if let Some((i, v)) = problem.optimum {
            tr.header.space.optimum_index = Some(i);
            tr.header.space.optimum_value = Some(v);
        }
    };
    match result {
        Ok(mut tr) => {
            stamp(&mut tr);
            Ok(tr)
        }
        Err(mut f) => {
            stamp(&mut f.partial);
            Err(f)
        }
    }
}

fn write_trace(path: &Path, trace: &RunTrace) -> Result<(), CliError> {
    let f = fs::File::create(path)?;
    let mut w = BufWriter::new(f);
    trace.write_jsonl(&mut w)?;
    std::io::Write::flush(&mut w)?;
    Ok(())
}

/// Runs every (method, replicate) pair on `workers` threads and writes
/// `traces/<method>/rep-XX.jsonl` and `aggregate.csv` under the output
/// directory. Failed replicates leave `rep-XX.jsonl.partial` and are left out
/// of the aggregate.
pub fn run_experiment(exp: &ExperimentConfig, workers: usize) -> Result<ExperimentOutcome, CliError> {
    exp.validate()?;
    let problem = Problem::build(&exp.problem, exp.problem_seed)?;
    let dir = &exp.output_dir;
    for m in &exp.methods {
        let mdir = dir.join("traces").join(m.name());
        if mdir.exists() {
            fs::remove_dir_all(&mdir)?;
        }
        fs::create_dir_all(&mdir)?;
    }

    let jobs: Vec<(usize, usize)> = (0..exp.methods.len())
        .flat_map(|m| (0..exp.replicates).map(move |r| (m, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let results: Vec<Result<Result<RunTrace, String>, CliError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(m, r)| {
                let method = &exp.methods[m];
                let path = trace_path(dir, &method.name(), r);
                match run_replicate(exp, method, &problem, r) {
                    Ok(tr) => {
                        write_trace(&path, &tr)?;
                        Ok(Ok(tr))
                    }
                    Err(f) => {
                        write_trace(&path.with_extension("jsonl.partial"), &f.partial)?;
                        Ok(Err(f.to_string()))
                    }
                }
            })
            .collect()
    });

    let mut by_method: Vec<(String, Vec<RunTrace>)> =
        exp.methods.iter().map(|m| (m.name(), Vec::new())).collect();
    let mut failures = Vec::new();
    for (&(m, r), res) in jobs.iter().zip(results) {
        match res? {
            Ok(tr) => by_method[m].1.push(tr),
            Err(message) => failures.push(ReplicateFailure {
                method: by_method[m].0.clone(),
                replicate: r,
                message,
            }),
        }
    }
    for (name, traces) in &by_method {
        if traces.len() < exp.replicates {
            log::warn!(
                "{name}: aggregate covers {} of {} replicates",
                traces.len(),
                exp.replicates
            );
        }
    }
    let report = AggregateReport::from_traces(by_method.iter().map(|(m, t)| (m.as_str(), t.as_slice())));
    let aggregate_path = dir.join("aggregate.csv");
    report.write_csv(BufWriter::new(fs::File::create(&aggregate_path)?))?;
    Ok(ExperimentOutcome {
        report,
        failures,
        aggregate_path,
    })
}
