//! End-to-end experiment execution and artifact writing.
//!
//! A run writes four files into the output directory:
//!
//! | file              | columns / content                                                     |
//! |-------------------|-----------------------------------------------------------------------|
//! | `weights.csv`     | `n,re,im,mag,power_db` (power relative to strongest element)          |
//! | `beampattern.csv` | `theta_deg,power,power_db,desired_scaled` (power_db relative to peak) |
//! | `trace.csv`       | `iter,objective,lagrangian,primal_residual,alpha,matching_error_db,w_change` |
//! | `summary.json`    | run metrics, the resolved config and `schema_version`                 |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::admm::{self, IterationRecord};
use crate::array_model::{beampattern, build_steering_set, AngleGrid, WeightVector};
use crate::config::ExperimentConfig;
use crate::diagnostics::{cardinality, matching_error_db, peak_sidelobe_db, to_db, RunReport};
use crate::error::{Error, Result};
use crate::pattern_template::{build_template, DesiredPattern};

pub const SCHEMA_VERSION: &str = "1";

pub const WEIGHTS_FILE: &str = "weights.csv";
pub const BEAMPATTERN_FILE: &str = "beampattern.csv";
pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Everything a finished run produced.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub report: RunReport,
    pub weights: WeightVector,
    pub pattern: Vec<f64>,
    pub template: DesiredPattern,
    pub grid: AngleGrid,
}

/// Builds the problem from `cfg`, solves it and computes the metrics.
/// Nothing is written to disk.
pub fn synthesize(cfg: &ExperimentConfig) -> Result<Synthesis> {
    cfg.validate()?;
    let geometry = cfg.geometry()?;
    let grid = cfg.grid()?;
    let steering = build_steering_set(&geometry, &grid)?;
    let template = build_template(&grid, &cfg.mainlobes, cfg.sidelobe_level)?;
    let params = cfg.solver_params();

    let start = Instant::now();
    let outcome = admm::solve(&steering, &template, &params, None)?;
    let runtime_seconds = start.elapsed().as_secs_f64();

    let pattern = beampattern(&steering, &outcome.w)?;
    let report = RunReport {
        cardinality: cardinality(&outcome.w, cfg.cardinality_threshold),
        matching_error_db: matching_error_db(&pattern, outcome.alpha, &template)
            .unwrap_or(f64::NAN),
        peak_sidelobe_db: peak_sidelobe_db(&pattern, template.mainlobe_mask())
            .unwrap_or(f64::NAN),
        runtime_seconds,
        iterations: outcome.iterations(),
        converged: outcome.converged,
        final_alpha: outcome.alpha,
        trace: outcome.trace,
    };
    Ok(Synthesis {
        report,
        weights: outcome.w,
        pattern,
        template,
        grid,
    })
}

/// Runs `cfg` and writes every artifact into `cfg.output_dir`.
///
/// If the solver diverges, the partial `trace.csv` is still written before
/// the error is returned.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    match synthesize(cfg) {
        Ok(run) => {
            write_outputs(&run, cfg)?;
            Ok(run.report)
        }
        Err(Error::Diverged {
            iter,
            reason,
            trace,
        }) => {
            ensure_dir(&cfg.output_dir)?;
            write_file(&cfg.output_dir.join(TRACE_FILE), &trace_csv(&trace))?;
            Err(Error::Diverged {
                iter,
                reason,
                trace,
            })
        }
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: &'a str,
    #[serde(flatten)]
    report: &'a RunReport,
    config: &'a ExperimentConfig,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn weights_csv(w: &WeightVector) -> String {
    let powers = w.powers();
    let peak = powers.iter().cloned().fold(0.0, f64::max);
    let mut out = String::from("n,re,im,mag,power_db\n");
    for (n, (z, p)) in w.values().iter().zip(&powers).enumerate() {
        let rel = if peak > 0.0 { p / peak } else { 0.0 };
        writeln!(out, "{n},{},{},{},{}", z.re, z.im, z.norm(), to_db(rel)).unwrap();
    }
    out
}

pub fn beampattern_csv(grid: &AngleGrid, pattern: &[f64], template: &DesiredPattern, alpha: f64) -> String {
    let peak = pattern.iter().cloned().fold(0.0, f64::max);
    let mut out = String::from("theta_deg,power,power_db,desired_scaled\n");
    for ((theta, p), d) in grid.angles_deg().iter().zip(pattern).zip(template.values()) {
        let rel = if peak > 0.0 { p / peak } else { 0.0 };
        writeln!(out, "{theta},{p},{},{}", to_db(rel), alpha * d).unwrap();
    }
    out
}

pub fn trace_csv(trace: &[IterationRecord]) -> String {
    let mut out =
        String::from("iter,objective,lagrangian,primal_residual,alpha,matching_error_db,w_change\n");
    for r in trace {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.iter, r.objective, r.lagrangian, r.primal_residual, r.alpha, r.matching_error_db, r.w_change
        )
        .unwrap();
    }
    out
}

pub fn summary_json(report: &RunReport, cfg: &ExperimentConfig) -> String {
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        report,
        config: cfg,
    };
    serde_json::to_string_pretty(&summary).expect("summary serializes")
}

/// Writes the four run artifacts. Returns their paths.
pub fn write_outputs(run: &Synthesis, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let files = [
        (WEIGHTS_FILE, weights_csv(&run.weights)),
        (
            BEAMPATTERN_FILE,
            beampattern_csv(&run.grid, &run.pattern, &run.template, run.report.final_alpha),
        ),
        (TRACE_FILE, trace_csv(&run.report.trace)),
        (SUMMARY_FILE, summary_json(&run.report, cfg)),
    ];
    let mut paths = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let path = dir.join(name);
        write_file(&path, &contents)?;
        paths.push(path);
    }
    Ok(paths)
}
