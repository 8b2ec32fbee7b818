//! Sparse transmit-array synthesis: jointly fits a beampattern template and
//! drives element powers toward a sparse selection by penalizing their
//! Shannon entropy, solved with a majorization-based ADMM.

pub mod admm;
pub mod array_model;
pub mod diagnostics;
pub mod entropy_majorizer;
pub mod error;
pub mod pattern_template;

pub use admm::{solve, AdmmState, IterationRecord, SolveOutcome, SolverParams};
pub use array_model::{build_steering_set, AngleGrid, ArrayGeometry, SteeringSet, WeightVector};
pub use error::{Error, Result};
pub use pattern_template::{build_template, DesiredPattern, MainlobeSpec};
pub mod config;
pub mod runner;

pub use config::{parse_config, ExperimentConfig};
pub use runner::{run_experiment, synthesize};
