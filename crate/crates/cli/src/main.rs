//! `hornpair` command-line front end.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use hornpair::chc::{emit_smtlib, system_to_string, ChcSystem};
use hornpair::domains::DomainTag;
use hornpair_cli::pipeline::{run_pipeline, Pass, PipelineSpec};
use hornpair_cli::suite::{load_problem, problem_files, run_problems};
use hornpair_cli::{check_trivial_sat, CliError, SolverCommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "hornpair", version, about = "Specialization and predicate pairing for constrained Horn clauses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pipeline over problem files and directories and report statistics.
    Run {
        /// Comma-separated passes, e.g. `asp:oct,app:oct,solve`.
        #[arg(long)]
        pipeline: String,
        /// Domain of passes written without one.
        #[arg(long, default_value = "poly", value_parser = parse_domain)]
        domain_default: DomainTag,
        /// Seconds allowed per pass and per solver call.
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Solver command template; `{file}` is the SMT-LIB script.
        #[arg(long)]
        solver: Option<String>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave wall-clock times out of the report.
        #[arg(long)]
        no_times: bool,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Transform one problem and print the resulting clauses.
    Transform {
        #[arg(long, value_enum, default_value_t = Strategy::App)]
        strategy: Strategy,
        #[arg(long, default_value = "poly", value_parser = parse_domain)]
        domain: DomainTag,
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Write the clauses here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        input: PathBuf,
    },
    /// Print a problem as an SMT-LIB HORN script.
    Emit {
        #[arg(short, long)]
        output: Option<PathBuf>,
        input: PathBuf,
    },
    /// Clause, predicate and constrained-fact counts of problem files.
    Stats {
        #[arg(long)]
        json: bool,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Asp,
    App,
}

fn parse_domain(s: &str) -> Result<DomainTag, String> {
    s.parse()
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Files as given, directories expanded to their `.clp` files.
fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<(String, ChcSystem)>, CliError> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let files = problem_files(input)?;
            if files.is_empty() {
                return Err(CliError::EmptySuite(input.clone()));
            }
            for f in files {
                out.push(load_problem(&f)?);
            }
        } else {
            out.push(load_problem(input)?);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct FileStats {
    problem: String,
    predicates: usize,
    clauses: usize,
    goals: usize,
    constrained_facts: usize,
    trivially_sat: bool,
}

/// Ok(true) when every problem completed without a pass error.
fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run {
            pipeline,
            domain_default,
            timeout,
            solver,
            out,
            no_times,
            inputs,
        } => {
            let spec = PipelineSpec::parse(&pipeline, domain_default)?
                .with_timeout(Duration::from_secs(timeout))
                .with_solver(SolverCommand::resolve(solver.as_deref()));
            let problems = collect_inputs(&inputs)?;
            let mut report = run_problems(&spec, &problems);
            if no_times {
                report = report.without_times();
            }
            for p in &report.problems {
                if let Some(e) = &p.error {
                    log::error!("{}: {e}", p.problem);
                }
            }
            if let Some(path) = &out {
                write_out(Some(path), &report.to_json()?)?;
            }
            print!("{}", report.to_table());
            Ok(report.problems.iter().all(|p| p.error.is_none()))
        }
        Command::Transform {
            strategy,
            domain,
            timeout,
            output,
            input,
        } => {
            let pass = match strategy {
                Strategy::Asp => Pass::Asp(domain),
                Strategy::App => Pass::App(domain),
            };
            let spec = PipelineSpec {
                passes: vec![pass],
                timeout: Duration::from_secs(timeout),
                solver: None,
            };
            let (id, s) = load_problem(&input)?;
            let run = run_pipeline(&spec, &id, &s);
            if let Some(e) = &run.stats.error {
                log::error!("{id}: {e}");
                return Ok(false);
            }
            if run.stats.out_clauses.is_none() {
                log::error!("{id}: {pass} timed out after {timeout}s");
                return Ok(false);
            }
            write_out(output.as_deref(), &system_to_string(&run.system))?;
            Ok(true)
        }
        Command::Emit { output, input } => {
            let (_, s) = load_problem(&input)?;
            write_out(output.as_deref(), &emit_smtlib(&s))?;
            Ok(true)
        }
        Command::Stats { json, inputs } => {
            let rows: Vec<FileStats> = collect_inputs(&inputs)?
                .into_iter()
                .map(|(problem, s)| FileStats {
                    problem,
                    predicates: s.sigs.len(),
                    clauses: s.clauses.len(),
                    goals: s.goals().count(),
                    constrained_facts: s.constrained_facts().len(),
                    trivially_sat: check_trivial_sat(&s),
                })
                .collect();
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                println!("problem\tpredicates\tclauses\tgoals\tconstrained_facts\ttrivially_sat");
                for r in &rows {
                    println!(
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        r.problem, r.predicates, r.clauses, r.goals, r.constrained_facts, r.trivially_sat
                    );
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
