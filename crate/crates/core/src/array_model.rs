//! Uniform linear array geometry, steering vectors and beampattern evaluation.
//!
//! Angles are in degrees at every public boundary and converted to radians
//! once, inside [`steering_vector`]. The rank-1 matrices `a(θ)a(θ)^H` are never
//! formed; every quadratic form goes through the steering vector itself.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;

/// Tolerance on `|‖w‖² − 1|` for a vector flagged as normalized.
pub const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    n_elements: usize,
    spacing_ratio: f64,
}

impl ArrayGeometry {
    /// `spacing_ratio` is the element spacing divided by the wavelength.
    pub fn new(n_elements: usize, spacing_ratio: f64) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::Contract(format!(
                "array needs at least 2 elements, got {n_elements}"
            )));
        }
        if !(spacing_ratio.is_finite() && spacing_ratio > 0.0) {
            return Err(Error::Contract(format!(
                "spacing ratio must be positive, got {spacing_ratio}"
            )));
        }
        Ok(Self {
            n_elements,
            spacing_ratio,
        })
    }

    /// Half-wavelength spacing.
    pub fn half_wavelength(n_elements: usize) -> Result<Self> {
        Self::new(n_elements, 0.5)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing_ratio(&self) -> f64 {
        self.spacing_ratio
    }
}

fn check_angle(theta_deg: f64) -> Result<()> {
    if !(-90.0..=90.0).contains(&theta_deg) {
        return Err(Error::Domain(format!(
            "angle {theta_deg} deg outside [-90, 90]"
        )));
    }
    Ok(())
}

/// Strictly increasing sample of directions in [-90°, 90°].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    angles_deg: Vec<f64>,
}

impl AngleGrid {
    pub fn new(angles_deg: Vec<f64>) -> Result<Self> {
        if angles_deg.is_empty() {
            return Err(Error::Contract("angle grid is empty".into()));
        }
        for &a in &angles_deg {
            check_angle(a)?;
        }
        if let Some(w) = angles_deg.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Contract(format!(
                "angle grid not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(Self { angles_deg })
    }

    /// Samples `start, start + step, ...` up to and including `stop`.
    ///
    /// Points are computed as `start + i·step` rather than by repeated
    /// addition, and the last point is kept when it lands within `1e-9·step`
    /// of `stop`.
    pub fn uniform(start_deg: f64, stop_deg: f64, step_deg: f64) -> Result<Self> {
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::Contract(format!(
                "grid step must be positive, got {step_deg}"
            )));
        }
        if !(start_deg < stop_deg) {
            return Err(Error::Contract(format!(
                "grid start {start_deg} must be below stop {stop_deg}"
            )));
        }
        let count = ((stop_deg - start_deg) / step_deg + 1e-9).floor() as usize + 1;
        let angles = (0..count)
            .map(|i| (start_deg + i as f64 * step_deg).min(stop_deg))
            .collect();
        Self::new(angles)
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn count(&self) -> usize {
        self.angles_deg.len()
    }
}

/// `a(θ)` with entry `n` equal to `exp(j·2π·(d/ν)·n·sin θ)`.
pub fn steering_vector(geometry: &ArrayGeometry, theta_deg: f64) -> Result<CVector> {
    check_angle(theta_deg)?;
    let phase_step = 2.0 * std::f64::consts::PI * geometry.spacing_ratio * theta_deg.to_radians().sin();
    Ok(CVector::from_fn(geometry.n_elements, |n, _| {
        Complex64::from_polar(1.0, phase_step * n as f64)
    }))
}

/// Steering vectors for every angle of a grid.
#[derive(Debug, Clone)]
pub struct SteeringSet {
    vectors: Vec<CVector>,
    geometry: ArrayGeometry,
    grid: AngleGrid,
}

pub fn build_steering_set(geometry: &ArrayGeometry, grid: &AngleGrid) -> Result<SteeringSet> {
    let vectors = grid
        .angles_deg()
        .iter()
        .map(|&theta| steering_vector(geometry, theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(SteeringSet {
        vectors,
        geometry: *geometry,
        grid: grid.clone(),
    })
}

impl SteeringSet {
    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn n_elements(&self) -> usize {
        self.geometry.n_elements
    }

    pub fn n_angles(&self) -> usize {
        self.vectors.len()
    }

    pub(crate) fn check_len(&self, x: &CVector, what: &str) -> Result<()> {
        if x.len() != self.n_elements() {
            return Err(Error::Contract(format!(
                "{what} has length {}, array has {} elements",
                x.len(),
                self.n_elements()
            )));
        }
        Ok(())
    }

    /// `a_k^H x` for every grid angle.
    pub fn project(&self, x: &CVector) -> Result<Vec<Complex64>> {
        self.check_len(x, "vector")?;
        Ok(self.vectors.iter().map(|a| a.dotc(x)).collect())
    }
}

/// Complex element weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: CVector,
    normalized: bool,
}

impl WeightVector {
    /// Wraps arbitrary weights without any norm guarantee.
    pub fn new(values: CVector) -> Self {
        Self {
            values,
            normalized: false,
        }
    }

    /// Wraps weights that must already have unit power.
    pub fn normalized(values: CVector) -> Result<Self> {
        let power = values.norm_squared();
        if (power - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::Contract(format!(
                "weight vector power {power} is not 1"
            )));
        }
        Ok(Self {
            values,
            normalized: true,
        })
    }

    /// Projects arbitrary weights onto the unit sphere.
    pub fn from_projection(x: &CVector) -> Result<Self> {
        Ok(Self {
            values: project_unit_sphere(x)?,
            normalized: true,
        })
    }

    pub fn values(&self) -> &CVector {
        &self.values
    }

    pub fn into_values(self) -> CVector {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Per-element power `|w_n|²`.
    pub fn powers(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// `P(θ_k) = |a(θ_k)^H w|²` on every grid angle.
pub fn beampattern(steering: &SteeringSet, w: &WeightVector) -> Result<Vec<f64>> {
    Ok(steering
        .project(w.values())?
        .into_iter()
        .map(|c| c.norm_sqr())
        .collect())
}

/// `x / ‖x‖₂`. Fails on a zero or non-finite vector.
pub fn project_unit_sphere(x: &CVector) -> Result<CVector> {
    let norm = x.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Degenerate(format!(
            "cannot project vector with norm {norm} onto the unit sphere"
        )));
    }
    Ok(x.unscale(norm))
}
