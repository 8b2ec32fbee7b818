//! Run metrics: selected-element count, matching error and peak sidelobe level.
//!
//! None of these have a canonical definition for continuous weights, so the
//! conventions are fixed here:
//!
//! * an element is *selected* when its power exceeds `rel_threshold` times the
//!   strongest element's power (default `1e-3`, i.e. −30 dB);
//! * the matching error is `10·log10(Σ(P_k − α d_k)² / Σ(α d_k)²)`;
//! * the peak sidelobe level is the strongest sidelobe over the strongest
//!   mainlobe sample, in dB.
//!
//! Logarithms of zero are floored at [`DB_FLOOR`].

use serde::{Deserialize, Serialize};

use crate::admm::IterationRecord;
use crate::array_model::WeightVector;
use crate::error::{Error, Result};
use crate::pattern_template::DesiredPattern;

pub const DB_FLOOR: f64 = -300.0;

pub const DEFAULT_CARDINALITY_THRESHOLD: f64 = 1e-3;

/// `10·log10(x)`, floored at [`DB_FLOOR`].
pub fn to_db(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub cardinality: usize,
    pub matching_error_db: f64,
    pub peak_sidelobe_db: f64,
    pub runtime_seconds: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_alpha: f64,
    #[serde(skip)]
    pub trace: Vec<IterationRecord>,
}

/// Number of elements whose power exceeds `rel_threshold · max_m |w_m|²`.
pub fn cardinality(w: &WeightVector, rel_threshold: f64) -> usize {
    let powers = w.powers();
    let peak = powers.iter().cloned().fold(0.0, f64::max);
    let cut = rel_threshold * peak;
    powers.iter().filter(|&&p| p > cut).count()
}

pub fn matching_error_db(pattern: &[f64], alpha: f64, d: &DesiredPattern) -> Result<f64> {
    if pattern.len() != d.len() {
        return Err(Error::Contract(format!(
            "pattern has {} samples, template has {}",
            pattern.len(),
            d.len()
        )));
    }
    let (residual, reference) = pattern
        .iter()
        .zip(d.values())
        .fold((0.0, 0.0), |(r, e), (&p, &dk)| {
            let target = alpha * dk;
            (r + (p - target) * (p - target), e + target * target)
        });
    if !(reference > 0.0) {
        return Err(Error::Degenerate(
            "scaled template has zero energy".into(),
        ));
    }
    Ok(to_db(residual / reference))
}

pub fn peak_sidelobe_db(pattern: &[f64], mask: &[bool]) -> Result<f64> {
    if pattern.len() != mask.len() {
        return Err(Error::Contract(format!(
            "pattern has {} samples, mask has {}",
            pattern.len(),
            mask.len()
        )));
    }
    let mut main = None::<f64>;
    let mut side = None::<f64>;
    for (&p, &m) in pattern.iter().zip(mask) {
        let slot = if m { &mut main } else { &mut side };
        *slot = Some(slot.map_or(p, |q| q.max(p)));
    }
    match (main, side) {
        (Some(main), Some(side)) => {
            if !(main > 0.0) {
                return Err(Error::Degenerate("mainlobe carries no power".into()));
            }
            Ok(to_db(side / main))
        }
        _ => Err(Error::Contract(
            "peak sidelobe level needs both mainlobe and sidelobe samples".into(),
        )),
    }
}
