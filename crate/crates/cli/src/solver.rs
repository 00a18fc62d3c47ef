//! External CHC solver invocation through a command template.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use wait_timeout::ChildExt;

use crate::error::CliError;
use crate::pipeline::Verdict;

/// Overrides the configured solver command when set.
pub const SOLVER_ENV: &str = "HORNPAIR_SOLVER";

/// A whitespace-separated command line; `{file}` is replaced by the script
/// path, which is appended when the placeholder is absent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolverCommand {
    pub template: String,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SolverRun {
    pub verdict: Verdict,
    pub seconds: f64,
    pub stdout: String,
}

impl SolverCommand {
    pub fn new(template: impl Into<String>) -> Self {
        SolverCommand {
            template: template.into(),
        }
    }

    /// The environment override if present, else `configured`.
    pub fn resolve(configured: Option<&str>) -> Option<SolverCommand> {
        std::env::var(SOLVER_ENV)
            .ok()
            .filter(|s| !s.trim().is_empty())
            .or_else(|| configured.map(str::to_string))
            .map(SolverCommand::new)
    }

    pub fn argv(&self, file: &str) -> Vec<String> {
        let mut argv: Vec<String> = self.template.split_whitespace().map(|w| w.replace("{file}", file)).collect();
        if !self.template.contains("{file}") {
            argv.push(file.to_string());
        }
        argv
    }

    /// Runs the solver on `script`; a run past `timeout` is killed and
    /// reported as a timeout verdict.
    pub fn run(&self, script: &str, timeout: Duration) -> Result<SolverRun, CliError> {
        let io = |path: &std::path::Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        let mut file = tempfile::Builder::new().suffix(".smt2").tempfile().map_err(io(&std::env::temp_dir()))?;
        file.write_all(script.as_bytes()).map_err(io(file.path()))?;
        file.flush().map_err(io(file.path()))?;
        let argv = self.argv(&file.path().to_string_lossy());
        let (prog, args) = argv.split_first().ok_or(CliError::EmptySolverCommand)?;
        let start = Instant::now();
        let mut child = Command::new(prog)
            .args(args)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| CliError::SolverStart {
                cmd: self.template.clone(),
                source,
            })?;
        let mut pipe = child.stdout.take().expect("stdout is piped");
        let reader = std::thread::spawn(move || {
            let mut out = String::new();
            let _ = pipe.read_to_string(&mut out);
            out
        });
        let finished = child.wait_timeout(timeout).map_err(io(file.path()))?;
        if finished.is_none() {
            let _ = child.kill();
            let _ = child.wait();
        }
        let seconds = start.elapsed().as_secs_f64();
        let stdout = reader.join().unwrap_or_default();
        let verdict = match finished {
            None => Verdict::Timeout,
            Some(_) => parse_verdict(&stdout),
        };
        log::debug!("solver `{}` answered {verdict} in {seconds:.3}s", self.template);
        Ok(SolverRun { verdict, seconds, stdout })
    }
}

/// The first output line that is exactly `sat`, `unsat` or `unknown`.
pub fn parse_verdict(stdout: &str) -> Verdict {
    stdout
        .lines()
        .find_map(|l| match l.trim() {
            "sat" => Some(Verdict::Sat),
            "unsat" => Some(Verdict::Unsat),
            "unknown" => Some(Verdict::Unknown),
            _ => None,
        })
        .unwrap_or(Verdict::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placeholder_is_substituted_or_appended() {
        assert_eq!(SolverCommand::new("z3 -smt2 {file}").argv("a.smt2"), ["z3", "-smt2", "a.smt2"]);
        assert_eq!(SolverCommand::new("z3 -smt2").argv("a.smt2"), ["z3", "-smt2", "a.smt2"]);
    }

    #[test]
    fn first_verdict_line_wins() {
        assert_eq!(parse_verdict("(warning)\nunsat\nsat\n"), Verdict::Unsat);
        assert_eq!(parse_verdict("  sat  \n"), Verdict::Sat);
        assert_eq!(parse_verdict("satisfiable\n"), Verdict::Unknown);
        assert_eq!(parse_verdict(""), Verdict::Unknown);
    }
}
