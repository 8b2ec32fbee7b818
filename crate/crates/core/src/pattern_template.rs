//! Desired beampattern templates built from mainlobe intervals.

use serde::{Deserialize, Serialize};

use crate::array_model::AngleGrid;
use crate::error::{Error, Result};

/// Slack used when testing whether a grid angle sits on an interval endpoint.
const ENDPOINT_TOL_DEG: f64 = 1e-9;

/// Closed interval `[start_deg, end_deg]` with a desired pattern level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainlobeSpec {
    pub start_deg: f64,
    pub end_deg: f64,
    pub level: f64,
}

impl MainlobeSpec {
    pub fn new(start_deg: f64, end_deg: f64, level: f64) -> Result<Self> {
        let spec = Self {
            start_deg,
            end_deg,
            level,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |x: f64| (-90.0..=90.0).contains(&x);
        if !(in_range(self.start_deg) && in_range(self.end_deg)) {
            return Err(Error::Domain(format!(
                "mainlobe [{}, {}] leaves [-90, 90]",
                self.start_deg, self.end_deg
            )));
        }
        if !(self.start_deg < self.end_deg) {
            return Err(Error::config(
                "mainlobes",
                format!(
                    "mainlobe start {} must be below end {}",
                    self.start_deg, self.end_deg
                ),
            ));
        }
        if !(self.level.is_finite() && self.level > 0.0) {
            return Err(Error::config(
                "mainlobes",
                format!("mainlobe level must be positive, got {}", self.level),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, theta_deg: f64) -> bool {
        theta_deg >= self.start_deg - ENDPOINT_TOL_DEG && theta_deg <= self.end_deg + ENDPOINT_TOL_DEG
    }

    fn overlaps(&self, other: &MainlobeSpec) -> bool {
        self.start_deg <= other.end_deg && other.start_deg <= self.end_deg
    }
}

/// Template values `d(θ_k)` with the mask of mainlobe angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DesiredPattern {
    values: Vec<f64>,
    mainlobe_mask: Vec<bool>,
}

impl DesiredPattern {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mainlobe_mask(&self) -> &[bool] {
        &self.mainlobe_mask
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mainlobe_count(&self) -> usize {
        self.mainlobe_mask.iter().filter(|&&m| m).count()
    }

    /// `Σ_k d_k²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|d| d * d).sum()
    }

    /// Builds a template directly from values and mask, e.g. for tests on
    /// random instances. Lengths must agree and values must be finite.
    pub fn from_parts(values: Vec<f64>, mainlobe_mask: Vec<bool>) -> Result<Self> {
        if values.len() != mainlobe_mask.len() {
            return Err(Error::Contract(format!(
                "template has {} values but {} mask entries",
                values.len(),
                mainlobe_mask.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("template values must be finite".into()));
        }
        Ok(Self {
            values,
            mainlobe_mask,
        })
    }
}

/// Piecewise-constant template: the lobe level on the union of the lobes
/// (endpoints included) and `sidelobe_level` elsewhere.
pub fn build_template(
    grid: &AngleGrid,
    lobes: &[MainlobeSpec],
    sidelobe_level: f64,
) -> Result<DesiredPattern> {
    if lobes.is_empty() {
        return Err(Error::config("mainlobes", "at least one mainlobe is required"));
    }
    if !(sidelobe_level.is_finite() && sidelobe_level >= 0.0) {
        return Err(Error::config(
            "sidelobe_level",
            format!("must be non-negative, got {sidelobe_level}"),
        ));
    }
    for lobe in lobes {
        lobe.validate()?;
    }
    for (i, a) in lobes.iter().enumerate() {
        for b in &lobes[i + 1..] {
            if a.overlaps(b) && a.level != b.level {
                return Err(Error::config(
                    "mainlobes",
                    format!(
                        "lobes [{}, {}] and [{}, {}] overlap with levels {} and {}",
                        a.start_deg, a.end_deg, b.start_deg, b.end_deg, a.level, b.level
                    ),
                ));
            }
        }
    }

    let mut values = Vec::with_capacity(grid.count());
    let mut mask = Vec::with_capacity(grid.count());
    for &theta in grid.angles_deg() {
        match lobes.iter().find(|l| l.contains(theta)) {
            Some(lobe) => {
                values.push(lobe.level);
                mask.push(true);
            }
            None => {
                values.push(sidelobe_level);
                mask.push(false);
            }
        }
    }
    if !mask.iter().any(|&m| m) {
        return Err(Error::config(
            "mainlobes",
            "no grid angle falls inside any mainlobe",
        ));
    }
    Ok(DesiredPattern {
        values,
        mainlobe_mask: mask,
    })
}
