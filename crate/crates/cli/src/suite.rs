//! Suites of problems and their Table-1 style aggregates.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hornpair::chc::{parse_clp, ChcSystem};
use num::rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::pipeline::{ratio_as_string, run_pipeline, PassStatus, PipelineSpec, RunStats, SizeRatio};

/// One row per transformation pass. The solver columns are filled on the
/// last row only, as in a frame of the experiment table.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TableRow {
    pub label: String,
    #[serde(rename = "InProbls")]
    pub in_probls: usize,
    #[serde(rename = "OutProbls")]
    pub out_probls: Option<usize>,
    #[serde(rename = "OutCls")]
    pub out_cls: usize,
    #[serde(rename = "AvgTime1")]
    pub avg_time1: Option<f64>,
    #[serde(rename = "SizeRatio", serialize_with = "ratio_as_string")]
    pub size_ratio: Option<SizeRatio>,
    #[serde(rename = "SolvedProbls")]
    pub solved_probls: Option<usize>,
    #[serde(rename = "AvgTime2")]
    pub avg_time2: Option<f64>,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SuiteReport {
    pub pipeline: String,
    pub problems: Vec<RunStats>,
    pub rows: Vec<TableRow>,
}

/// A problem file's id (its file name) and parsed clauses.
pub fn load_problem(path: &Path) -> Result<(String, ChcSystem), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let system = parse_clp(&text).map_err(|source| CliError::Problem {
        path: path.to_path_buf(),
        source,
    })?;
    let id = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    Ok((id, system))
}

/// The `.clp` files of `dir` in name order.
pub fn problem_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "clp") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn run_suite(spec: &PipelineSpec, dir: &Path) -> Result<SuiteReport, CliError> {
    let files = problem_files(dir)?;
    if files.is_empty() {
        return Err(CliError::EmptySuite(dir.to_path_buf()));
    }
    let problems = files.iter().map(|f| load_problem(f)).collect::<Result<Vec<_>, _>>()?;
    Ok(run_problems(spec, &problems))
}

/// Runs every problem, in parallel, and aggregates in input order.
pub fn run_problems(spec: &PipelineSpec, problems: &[(String, ChcSystem)]) -> SuiteReport {
    let stats: Vec<RunStats> = problems.par_iter().map(|(id, s)| run_pipeline(spec, id, s).stats).collect();
    SuiteReport {
        pipeline: spec.describe(),
        rows: aggregate(spec, &stats),
        problems: stats,
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Table rows from per-problem records. A problem whose pass times out or
/// fails counts as input to that pass only; it is left out of the pass's
/// clause counts, times and ratio, and out of all later rows.
pub fn aggregate(spec: &PipelineSpec, stats: &[RunStats]) -> Vec<TableRow> {
    let ntrans = spec.passes.iter().filter(|p| p.is_transformation()).count();
    let mut rows = Vec::new();
    if ntrans == 0 {
        rows.push(TableRow {
            label: "input".into(),
            in_probls: stats.len(),
            out_probls: None,
            out_cls: stats.iter().map(|s| s.in_clauses).sum(),
            avg_time1: None,
            size_ratio: None,
            solved_probls: None,
            avg_time2: None,
        });
    }
    for k in 0..ntrans {
        let entered: Vec<_> = stats.iter().filter_map(|s| s.passes.get(k)).collect();
        let done: Vec<_> = entered.iter().filter(|p| p.status == PassStatus::Completed).collect();
        let in_cls: usize = done.iter().map(|p| p.in_clauses).sum();
        let out_cls: usize = done.iter().map(|p| p.out_clauses.unwrap_or(0)).sum();
        let times: Vec<f64> = done.iter().filter_map(|p| p.seconds).collect();
        let label = entered.first().map_or_else(|| format!("pass {}", k + 1), |p| p.pass.clone());
        rows.push(TableRow {
            label,
            in_probls: entered.len(),
            out_probls: Some(done.len()),
            out_cls,
            avg_time1: mean(&times),
            size_ratio: (in_cls > 0).then(|| Ratio::new(out_cls as u64, in_cls as u64)),
            solved_probls: None,
            avg_time2: None,
        });
    }
    if spec.passes.last() == Some(&crate::pipeline::Pass::Solve) {
        let solved: Vec<&RunStats> = stats.iter().filter(|s| s.verdict.is_some_and(|v| v.is_solved())).collect();
        let times: Vec<f64> = solved.iter().filter_map(|s| s.solver_seconds).collect();
        let last = rows.last_mut().expect("at least one row");
        last.solved_probls = Some(solved.len());
        last.avg_time2 = mean(&times);
    }
    rows
}

impl SuiteReport {
    /// Drops wall-clock fields so reruns compare byte for byte.
    pub fn without_times(mut self) -> Self {
        self.problems = self.problems.into_iter().map(RunStats::without_times).collect();
        for r in &mut self.rows {
            r.avg_time1 = None;
            r.avg_time2 = None;
        }
        self
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Fixed-width text table with the experiment table's columns.
    pub fn to_table(&self) -> String {
        let header = ["Pass", "InProbls", "OutProbls", "OutCls", "AvgTime1", "SizeRatio", "SolvedProbls", "AvgTime2"];
        let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        let time = |t: Option<f64>| opt(t.map(|t| format!("{t:.2}")));
        let cells: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.label.clone(),
                    r.in_probls.to_string(),
                    opt(r.out_probls.map(|n| n.to_string())),
                    r.out_cls.to_string(),
                    time(r.avg_time1),
                    opt(r.size_ratio.map(|q| format!("{:.2} ({q})", *q.numer() as f64 / *q.denom() as f64))),
                    opt(r.solved_probls.map(|n| n.to_string())),
                    time(r.avg_time2),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = format!("pipeline: {}\n", self.pipeline);
        let mut line = |cols: &mut dyn Iterator<Item = &str>| {
            let parts: Vec<String> = cols
                .zip(width)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut header.iter().copied());
        for row in &cells {
            line(&mut row.iter().map(String::as_str));
        }
        out
    }
}
