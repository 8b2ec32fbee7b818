//! Shannon-entropy sparsity regularizer and its tangent-plane majorizer.
//!
//! On the unit sphere the element powers `p_n = |w_n|²` sum to one and the
//! regularizer is `f(w) = g(p) = −Σ p_n ln p_n`. Since `g` is concave its
//! linearization at an anchor `p^t` is a global upper bound:
//!
//! `g(p) ≤ ∇g(p^t)ᵀ p + g(p^t) − ∇g(p^t)ᵀ p^t = w^H D_t w + const`
//!
//! with `D_t = diag(∇g(p^t))` and `∇g(p^t)_n = −ln p^t_n − 1`.

use crate::array_model::WeightVector;
use crate::error::{Error, Result};

/// Floor applied to powers before taking a logarithm.
pub const POWER_FLOOR: f64 = 1e-12;

/// Tolerance on `|Σ p_n − 1|` accepted as "normalized".
pub const SIMPLEX_TOL: f64 = 1e-10;

/// Element powers `|w_n|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerVector {
    values: Vec<f64>,
}

impl PowerVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&p| !(p.is_finite() && p >= 0.0)) {
            return Err(Error::Contract(
                "powers must be finite and non-negative".into(),
            ));
        }
        Ok(Self { values })
    }

    /// Powers of a unit-norm weight vector.
    pub fn from_weights(w: &WeightVector) -> Result<Self> {
        let values = w.powers();
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Contract(format!(
                "weight vector has total power {total}, expected 1"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Diagonal of `D_t` together with the additive constant of the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizerDiag {
    pub diag: Vec<f64>,
    pub constant: f64,
}

impl MajorizerDiag {
    /// The all-zero majorizer. Used to switch the regularizer off.
    pub fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            constant: 0.0,
        }
    }
}

fn neg_p_log_p(p: f64) -> f64 {
    if p < POWER_FLOOR {
        0.0
    } else {
        -p * p.ln()
    }
}

/// `g(p) = −Σ p_n ln p_n`, with entries below the floor contributing zero.
pub fn entropy_of_powers(p: &PowerVector) -> f64 {
    p.values.iter().map(|&x| neg_p_log_p(x)).sum()
}

/// Shannon entropy of the normalized element powers of `w`.
pub fn entropy(w: &WeightVector) -> Result<f64> {
    Ok(entropy_of_powers(&PowerVector::from_weights(w)?))
}

/// `∇g(p)_n = −ln(max(p_n, ε)) − 1`.
pub fn entropy_gradient(p: &PowerVector) -> Vec<f64> {
    p.values
        .iter()
        .map(|&x| -x.max(POWER_FLOOR).ln() - 1.0)
        .collect()
}

pub fn majorizer_diag(anchor: &WeightVector) -> Result<MajorizerDiag> {
    let p = PowerVector::from_weights(anchor)?;
    let diag = entropy_gradient(&p);
    let tangent: f64 = diag.iter().zip(p.values()).map(|(g, x)| g * x).sum();
    Ok(MajorizerDiag {
        constant: entropy_of_powers(&p) - tangent,
        diag,
    })
}

/// `w^H D_t w + const`.
pub fn majorizer_value(w: &WeightVector, m: &MajorizerDiag) -> Result<f64> {
    if w.len() != m.diag.len() {
        return Err(Error::Contract(format!(
            "weight length {} does not match majorizer length {}",
            w.len(),
            m.diag.len()
        )));
    }
    let quad: f64 = m
        .diag
        .iter()
        .zip(w.values().iter())
        .map(|(d, z)| d * z.norm_sqr())
        .sum();
    Ok(quad + m.constant)
}
