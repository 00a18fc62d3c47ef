//! Pass sequences over one problem and their statistics.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use hornpair::chc::{emit_smtlib, parse_clp, system_to_string, ChcSystem};
use hornpair::domains::DomainTag;
use hornpair::lp;
use hornpair::transform::{transform_system, StrategyConfig};
use num::rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;
use crate::solver::SolverCommand;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pass {
    Asp(DomainTag),
    App(DomainTag),
    /// Renders the current clauses as SMT-LIB.
    Emit,
    /// Decides satisfiability: trivially when there are no constrained
    /// facts, otherwise with the external solver.
    Solve,
}

impl Pass {
    pub fn is_transformation(self) -> bool {
        matches!(self, Pass::Asp(_) | Pass::App(_))
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pass::Asp(t) => write!(f, "asp:{t}"),
            Pass::App(t) => write!(f, "app:{t}"),
            Pass::Emit => f.write_str("emit"),
            Pass::Solve => f.write_str("solve"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineSpec {
    pub passes: Vec<Pass>,
    pub timeout: Duration,
    pub solver: Option<SolverCommand>,
}

impl PipelineSpec {
    /// Parses `asp:oct,app,solve`; a pass without a domain uses `default`.
    pub fn parse(text: &str, default: DomainTag) -> Result<PipelineSpec, CliError> {
        let bad = |msg: String| CliError::Pipeline(msg);
        let mut passes = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, domain) = match item.split_once(':') {
                Some((n, d)) => (n, Some(DomainTag::from_str(d).map_err(bad)?)),
                None => (item, None),
            };
            let tag = domain.unwrap_or(default);
            let pass = match name.to_ascii_lowercase().as_str() {
                "asp" => Pass::Asp(tag),
                "app" => Pass::App(tag),
                "emit" if domain.is_none() => Pass::Emit,
                "solve" if domain.is_none() => Pass::Solve,
                _ => return Err(bad(format!("unknown pass `{item}`"))),
            };
            passes.push(pass);
        }
        if passes.is_empty() {
            return Err(bad("no passes".into()));
        }
        let solves = passes.iter().filter(|p| **p == Pass::Solve).count();
        if solves > 1 || (solves == 1 && passes.last() != Some(&Pass::Solve)) {
            return Err(bad("`solve` may appear once, as the last pass".into()));
        }
        Ok(PipelineSpec {
            passes,
            timeout: DEFAULT_TIMEOUT,
            solver: None,
        })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_solver(mut self, solver: Option<SolverCommand>) -> Self {
        self.solver = solver;
        self
    }

    pub fn describe(&self) -> String {
        self.passes.iter().map(Pass::to_string).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
    Timeout,
}

impl Verdict {
    pub fn is_solved(self) -> bool {
        matches!(self, Verdict::Sat | Verdict::Unsat)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
            Verdict::Timeout => "timeout",
        })
    }
}

/// How the solve pass reached its verdict.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decider {
    /// No constrained facts: every predicate false is a model.
    Trivial,
    External,
    /// No solver configured.
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PassStatus {
    Completed,
    Timeout,
    Failed,
}

pub type SizeRatio = Ratio<u64>;

pub(crate) fn ratio_as_string<S: Serializer>(r: &Option<SizeRatio>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct PassStats {
    pub pass: String,
    pub status: PassStatus,
    pub in_clauses: usize,
    pub out_clauses: Option<usize>,
    #[serde(serialize_with = "ratio_as_string")]
    pub size_ratio: Option<SizeRatio>,
    pub seconds: Option<f64>,
}

/// One problem's record. Clause counts cover the transformation passes;
/// `out_clauses` and `size_ratio` are absent when one of them did not
/// complete.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct RunStats {
    pub problem: String,
    pub in_clauses: usize,
    pub out_clauses: Option<usize>,
    #[serde(serialize_with = "ratio_as_string")]
    pub size_ratio: Option<SizeRatio>,
    pub passes: Vec<PassStats>,
    pub verdict: Option<Verdict>,
    pub decider: Option<Decider>,
    pub solver_seconds: Option<f64>,
    pub error: Option<String>,
}

impl RunStats {
    /// Clears every wall-clock field so reports compare byte for byte.
    pub fn without_times(mut self) -> Self {
        for p in &mut self.passes {
            p.seconds = None;
        }
        self.solver_seconds = None;
        self
    }
}

/// The final clause set and any emitted script alongside the statistics.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub stats: RunStats,
    pub system: ChcSystem,
    pub smtlib: Option<String>,
}

/// Every predicate false is a model exactly when no clause with an empty
/// body has a satisfiable constraint: no constrained fact and no goal
/// `false :- c` with `c` satisfiable.
pub fn check_trivial_sat(s: &ChcSystem) -> bool {
    s.constrained_facts().is_empty()
        && s.goals().all(|g| !g.body.is_empty() || !lp::is_satisfiable(&g.constraint))
}

fn size_ratio(out: usize, inp: usize) -> Option<SizeRatio> {
    (inp > 0).then(|| Ratio::new(out as u64, inp as u64))
}

/// Clauses go through print and parse between passes, so a pipeline run
/// in one go and one split across files see the same input at each pass.
fn renormalize(s: &ChcSystem) -> ChcSystem {
    parse_clp(&system_to_string(s)).expect("printed systems parse")
}

/// Runs the passes in order. A timed-out or failed transformation stops the
/// problem; the record is produced either way.
pub fn run_pipeline(spec: &PipelineSpec, id: &str, problem: &ChcSystem) -> RunOutput {
    let mut stats = RunStats {
        problem: id.to_string(),
        in_clauses: problem.clauses.len(),
        out_clauses: Some(problem.clauses.len()),
        size_ratio: size_ratio(problem.clauses.len(), problem.clauses.len()),
        passes: Vec::new(),
        verdict: None,
        decider: None,
        solver_seconds: None,
        error: None,
    };
    let mut cur = problem.clone();
    let mut smtlib = None;
    for &pass in &spec.passes {
        match pass {
            Pass::Asp(tag) | Pass::App(tag) => {
                let mut cfg = match pass {
                    Pass::Asp(_) => StrategyConfig::asp(tag),
                    _ => StrategyConfig::app(tag),
                };
                cfg.timeout = Some(spec.timeout);
                let start = Instant::now();
                let result = transform_system(&cur, &cfg);
                let secs = start.elapsed().as_secs_f64();
                let mut record = PassStats {
                    pass: pass.to_string(),
                    status: PassStatus::Completed,
                    in_clauses: cur.clauses.len(),
                    out_clauses: None,
                    size_ratio: None,
                    seconds: Some(secs),
                };
                match result {
                    Ok(_) if start.elapsed() > spec.timeout => record.status = PassStatus::Timeout,
                    Ok(out) => {
                        let next = renormalize(&out.system);
                        record.out_clauses = Some(next.clauses.len());
                        record.size_ratio = size_ratio(next.clauses.len(), cur.clauses.len());
                        cur = next;
                    }
                    Err(hornpair::Error::Timeout(_)) => record.status = PassStatus::Timeout,
                    Err(e) => {
                        record.status = PassStatus::Failed;
                        stats.error = Some(format!("{pass}: {e}"));
                    }
                }
                let status = record.status;
                stats.passes.push(record);
                if status != PassStatus::Completed {
                    stats.out_clauses = None;
                    stats.size_ratio = None;
                    if status == PassStatus::Timeout {
                        stats.verdict = Some(Verdict::Timeout);
                    }
                    break;
                }
                stats.out_clauses = Some(cur.clauses.len());
                stats.size_ratio = size_ratio(cur.clauses.len(), stats.in_clauses);
            }
            Pass::Emit => smtlib = Some(emit_smtlib(&cur)),
            Pass::Solve => solve(spec, &cur, &mut stats),
        }
    }
    RunOutput {
        stats,
        system: cur,
        smtlib,
    }
}

fn solve(spec: &PipelineSpec, s: &ChcSystem, stats: &mut RunStats) {
    if check_trivial_sat(s) {
        stats.verdict = Some(Verdict::Sat);
        stats.decider = Some(Decider::Trivial);
        stats.solver_seconds = Some(0.0);
        return;
    }
    let Some(solver) = &spec.solver else {
        stats.verdict = Some(Verdict::Unknown);
        stats.decider = Some(Decider::None);
        return;
    };
    stats.decider = Some(Decider::External);
    match solver.run(&emit_smtlib(s), spec.timeout) {
        Ok(run) => {
            stats.verdict = Some(run.verdict);
            stats.solver_seconds = Some(run.seconds);
        }
        Err(e) => stats.error = Some(format!("solve: {e}")),
    }
}
