//! Experiment configuration: one JSON document per run.
//!
//! Every field is optional except `mainlobes`; omitted fields fall back to
//! the reference setup (30 elements at half-wavelength spacing, a 1° grid
//! over [-90°, 90°], λ = 0.1, ρ = 30, η = 1e-8).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::admm::SolverParams;
use crate::array_model::{AngleGrid, ArrayGeometry};
use crate::diagnostics::DEFAULT_CARDINALITY_THRESHOLD;
use crate::error::{Error, Result};
use crate::pattern_template::MainlobeSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_elements: usize,
    pub spacing_ratio: f64,
    pub grid_start_deg: f64,
    pub grid_stop_deg: f64,
    pub grid_step_deg: f64,
    pub mainlobes: Vec<MainlobeSpec>,
    pub sidelobe_level: f64,
    pub lambda: f64,
    pub rho: f64,
    pub eta: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub cardinality_threshold: f64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let solver = SolverParams::default();
        Self {
            n_elements: 30,
            spacing_ratio: 0.5,
            grid_start_deg: -90.0,
            grid_stop_deg: 90.0,
            grid_step_deg: 1.0,
            mainlobes: Vec::new(),
            sidelobe_level: 0.0,
            lambda: solver.lambda,
            rho: solver.rho,
            eta: solver.eta,
            max_iters: solver.max_iters,
            seed: solver.seed,
            cardinality_threshold: DEFAULT_CARDINALITY_THRESHOLD,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn solver_params(&self) -> SolverParams {
        SolverParams {
            lambda: self.lambda,
            rho: self.rho,
            eta: self.eta,
            max_iters: self.max_iters,
            seed: self.seed,
        }
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::new(self.n_elements, self.spacing_ratio)
            .map_err(|e| Error::config("n_elements/spacing_ratio", e.to_string()))
    }

    pub fn grid(&self) -> Result<AngleGrid> {
        AngleGrid::uniform(self.grid_start_deg, self.grid_stop_deg, self.grid_step_deg)
            .map_err(|e| Error::config("grid", e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements < 2 {
            return Err(Error::config("n_elements", "must be at least 2"));
        }
        if !(self.spacing_ratio.is_finite() && self.spacing_ratio > 0.0) {
            return Err(Error::config("spacing_ratio", "must be positive"));
        }
        if !(self.grid_step_deg.is_finite() && self.grid_step_deg > 0.0) {
            return Err(Error::config("grid_step_deg", "must be positive"));
        }
        if !(self.grid_start_deg < self.grid_stop_deg) {
            return Err(Error::config(
                "grid_start_deg",
                "must be below grid_stop_deg",
            ));
        }
        for (field, x) in [
            ("grid_start_deg", self.grid_start_deg),
            ("grid_stop_deg", self.grid_stop_deg),
        ] {
            if !(-90.0..=90.0).contains(&x) {
                return Err(Error::config(field, "must lie in [-90, 90]"));
            }
        }
        if self.mainlobes.is_empty() {
            return Err(Error::config("mainlobes", "at least one mainlobe is required"));
        }
        for lobe in &self.mainlobes {
            lobe.validate().map_err(|e| match e {
                Error::Config { .. } => e,
                other => Error::config("mainlobes", other.to_string()),
            })?;
        }
        if !(self.sidelobe_level.is_finite() && self.sidelobe_level >= 0.0) {
            return Err(Error::config("sidelobe_level", "must be non-negative"));
        }
        if !(self.cardinality_threshold > 0.0 && self.cardinality_threshold < 1.0) {
            return Err(Error::config(
                "cardinality_threshold",
                "must lie strictly between 0 and 1",
            ));
        }
        self.solver_params().validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
