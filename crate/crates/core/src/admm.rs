//! Majorization-based ADMM for joint beampattern matching and sparse
//! element selection.
//!
//! Problem, with `P_k(w) = |a_k^H w|²`:
//!
//! ```text
//! minimize_{α, ‖w‖=1}  λ Σ_k (P_k(w) − α d_k)² + f(w)
//! ```
//!
//! The quartic term is split through `v = w`, giving the bilinear fit
//! `φ(α, v, w) = Σ_k |w^H A_k v − α d_k|²` and the scaled augmented Lagrangian
//! `λφ + f(w) + (ρ/2)‖w − v + u‖²`. Each outer iteration runs
//! α → v → (∇g, D_t) → w → u, where the entropy `f` is replaced by its
//! tangent majorizer at the current `w` and the sphere constraint is applied
//! by projecting the unconstrained minimizer.
//!
//! Both linear systems have the form `(λ Σ_k q_k a_k a_k^H + diag + (ρ/2)I) x = b`.
//! For a uniform linear array `a_k a_k^H` is Toeplitz, so the matrix is
//! assembled from `N` lag sums instead of `K` outer products.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::array_model::{beampattern, project_unit_sphere, CVector, SteeringSet, WeightVector};
use crate::diagnostics::matching_error_db;
use crate::entropy_majorizer::{entropy, majorizer_diag, MajorizerDiag};
use crate::error::{Error, Result};
use crate::pattern_template::DesiredPattern;

/// Tolerance on `|‖w‖ − 1|` checked on every iterate.
pub const SPHERE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub lambda: f64,
    pub rho: f64,
    pub eta: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            rho: 30.0,
            eta: 1e-8,
            max_iters: 1000,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::config("lambda", "lambda must be positive"));
        }
        // D_t ≥ −I on the sphere, so ρ/2 > 1 keeps the w-system positive definite.
        if !(self.rho.is_finite() && self.rho > 2.0) {
            return Err(Error::config("rho", "rho must exceed 2"));
        }
        if !(self.eta > 0.0) {
            return Err(Error::config("eta", "eta must be positive"));
        }
        Ok(())
    }
}

/// Iterates `(α, v, w, u)` and the iteration counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub alpha: f64,
    pub v: CVector,
    pub w: WeightVector,
    /// Scaled dual `γ/ρ`.
    pub u: CVector,
    pub iter: usize,
}

fn complex_gaussian(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

impl AdmmState {
    /// Unit-norm complex Gaussian `v` and `w` (drawn in that order), `α = 1`,
    /// `u = 0`.
    pub fn random(n_elements: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = project_unit_sphere(&complex_gaussian(&mut rng, n_elements))?;
        let w = WeightVector::from_projection(&complex_gaussian(&mut rng, n_elements))?;
        Ok(Self {
            alpha: 1.0,
            v,
            w,
            u: CVector::zeros(n_elements),
            iter: 0,
        })
    }

    fn is_finite(&self) -> bool {
        self.alpha.is_finite()
            && [&self.v, self.w.values(), &self.u]
                .iter()
                .all(|x| x.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub objective: f64,
    pub lagrangian: f64,
    pub primal_residual: f64,
    pub alpha: f64,
    pub matching_error_db: f64,
    pub w_change: f64,
}

/// `r_k = w^H a_k a_k^H v = conj(a_k^H w)·(a_k^H v)`.
pub fn inner_products(steering: &SteeringSet, w: &CVector, v: &CVector) -> Result<Vec<Complex64>> {
    let aw = steering.project(w)?;
    let av = steering.project(v)?;
    Ok(aw.iter().zip(&av).map(|(x, y)| x.conj() * y).collect())
}

/// Least-squares scale `α = Σ d_k Re(r_k) / Σ d_k²`.
pub fn update_alpha(r: &[Complex64], d: &DesiredPattern) -> Result<f64> {
    if r.len() != d.len() {
        return Err(Error::Contract(format!(
            "{} inner products for a template of length {}",
            r.len(),
            d.len()
        )));
    }
    let energy = d.energy();
    if !(energy > 0.0) {
        return Err(Error::Degenerate("template is identically zero".into()));
    }
    let cross: f64 = r.iter().zip(d.values()).map(|(rk, dk)| dk * rk.re).sum();
    Ok(cross / energy)
}

/// Assembles `λ Σ_k q_k a_k a_k^H + diag(extra) + shift·I`.
///
/// Entry `(m, n)` of `a_k a_k^H` is `a_k[m−n]` for `m ≥ n`, so only the lag sums
/// `t_l = λ Σ_k q_k a_k[l]` are accumulated.
fn assemble_system(
    steering: &SteeringSet,
    lambda: f64,
    weights: &[f64],
    extra_diag: Option<&[f64]>,
    shift: f64,
) -> DMatrix<Complex64> {
    let n = steering.n_elements();
    let mut lags = vec![Complex64::new(0.0, 0.0); n];
    for (a, &q) in steering.vectors().iter().zip(weights) {
        for (t, z) in lags.iter_mut().zip(a.iter()) {
            *t += z * q;
        }
    }
    for t in lags.iter_mut() {
        *t *= lambda;
    }
    DMatrix::from_fn(n, n, |m, col| {
        let mut entry = if m >= col {
            lags[m - col]
        } else {
            lags[col - m].conj()
        };
        if m == col {
            entry = Complex64::new(entry.re + shift + extra_diag.map_or(0.0, |e| e[m]), 0.0);
        }
        entry
    })
}

/// `λα Σ_k d_k a_k c_k`.
fn weighted_steering_sum(steering: &SteeringSet, scale: f64, d: &[f64], c: &[Complex64]) -> CVector {
    let mut out = CVector::zeros(steering.n_elements());
    for ((a, &dk), &ck) in steering.vectors().iter().zip(d).zip(c) {
        if dk != 0.0 {
            out.axpy(ck * (scale * dk), a, Complex64::new(1.0, 0.0));
        }
    }
    out
}

fn hpd_solve(matrix: DMatrix<Complex64>, rhs: CVector, what: &str) -> Result<CVector> {
    let chol = matrix.cholesky().ok_or_else(|| {
        Error::Numerical(format!("{what} system is not Hermitian positive definite"))
    })?;
    let x = chol.solve(&rhs);
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical(format!("{what} solve produced non-finite entries")));
    }
    Ok(x)
}

fn check_dims(steering: &SteeringSet, d: &DesiredPattern) -> Result<()> {
    if d.len() != steering.n_angles() {
        return Err(Error::Contract(format!(
            "template has {} samples, steering set has {} angles",
            d.len(),
            steering.n_angles()
        )));
    }
    Ok(())
}

/// The v-block: solves `(Ξ₂ + (ρ/2)I) v = Υ₂ w + (ρ/2)(w + u)` with
/// `Ξ₂ = λ Σ_k |a_k^H w|² a_k a_k^H` and `Υ₂ w = λα Σ_k d_k a_k (a_k^H w)`.
pub fn update_v(
    steering: &SteeringSet,
    w: &CVector,
    u: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    params: &SolverParams,
) -> Result<CVector> {
    check_dims(steering, d)?;
    steering.check_len(u, "dual")?;
    let aw = steering.project(w)?;
    let powers: Vec<f64> = aw.iter().map(|c| c.norm_sqr()).collect();
    let half_rho = 0.5 * params.rho;
    let system = assemble_system(steering, params.lambda, &powers, None, half_rho);
    let rhs = weighted_steering_sum(steering, params.lambda * alpha, d.values(), &aw)
        + (w + u) * Complex64::from(half_rho);
    hpd_solve(system, rhs, "v-update")
}

/// Unconstrained minimizer of the majorized w-subproblem:
/// `(Ξ₃ + D_t + (ρ/2)I) ŵ = Υ₃ v + (ρ/2)(v − u)` with
/// `Ξ₃ = λ Σ_k |a_k^H v|² a_k a_k^H` and `Υ₃ v = λα Σ_k d_k a_k (a_k^H v)`.
pub fn solve_w_unprojected(
    steering: &SteeringSet,
    v: &CVector,
    u: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    m: &MajorizerDiag,
    params: &SolverParams,
) -> Result<CVector> {
    check_dims(steering, d)?;
    steering.check_len(u, "dual")?;
    if m.diag.len() != steering.n_elements() {
        return Err(Error::Contract("majorizer length does not match array".into()));
    }
    let av = steering.project(v)?;
    let powers: Vec<f64> = av.iter().map(|c| c.norm_sqr()).collect();
    let half_rho = 0.5 * params.rho;
    let system = assemble_system(steering, params.lambda, &powers, Some(&m.diag), half_rho);
    let rhs = weighted_steering_sum(steering, params.lambda * alpha, d.values(), &av)
        + (v - u) * Complex64::from(half_rho);
    hpd_solve(system, rhs, "w-update")
}

/// The w-block: [`solve_w_unprojected`] followed by projection onto the sphere.
pub fn update_w(
    steering: &SteeringSet,
    v: &CVector,
    u: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    m: &MajorizerDiag,
    params: &SolverParams,
) -> Result<WeightVector> {
    let w_hat = solve_w_unprojected(steering, v, u, alpha, d, m, params)?;
    WeightVector::from_projection(&w_hat)
}

/// Scaled dual ascent `u + (w − v)`.
pub fn update_dual(u: &CVector, w: &CVector, v: &CVector) -> Result<CVector> {
    if u.len() != w.len() || w.len() != v.len() {
        return Err(Error::Contract("dual update dimension mismatch".into()));
    }
    Ok(u + (w - v))
}

/// `λ Σ_k (P_k(w) − α d_k)² + f(w)`.
pub fn objective_value(
    steering: &SteeringSet,
    w: &WeightVector,
    alpha: f64,
    d: &DesiredPattern,
    params: &SolverParams,
) -> Result<f64> {
    check_dims(steering, d)?;
    let p = beampattern(steering, w)?;
    let fit: f64 = p
        .iter()
        .zip(d.values())
        .map(|(pk, dk)| (pk - alpha * dk).powi(2))
        .sum();
    Ok(params.lambda * fit + entropy(w)?)
}

/// `λ φ(α, v, w) + f(w) + (ρ/2)‖w − v + u‖²`.
pub fn augmented_lagrangian(
    state: &AdmmState,
    steering: &SteeringSet,
    d: &DesiredPattern,
    params: &SolverParams,
) -> Result<f64> {
    check_dims(steering, d)?;
    let r = inner_products(steering, state.w.values(), &state.v)?;
    let fit: f64 = r
        .iter()
        .zip(d.values())
        .map(|(rk, dk)| (rk - Complex64::from(state.alpha * dk)).norm_sqr())
        .sum();
    let gap = (state.w.values() - &state.v + &state.u).norm_squared();
    Ok(params.lambda * fit + entropy(&state.w)? + 0.5 * params.rho * gap)
}

/// Intermediate quantities of one outer iteration, handed to observers.
#[derive(Debug)]
pub struct StepView<'a> {
    /// State before the iteration.
    pub prev: &'a AdmmState,
    pub alpha: f64,
    pub v: &'a CVector,
    pub majorizer: &'a MajorizerDiag,
    /// Unconstrained w-subproblem solution before projection.
    pub w_hat: &'a CVector,
    /// State after the iteration.
    pub next: &'a AdmmState,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub w: WeightVector,
    pub alpha: f64,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub state: AdmmState,
}

impl SolveOutcome {
    pub fn iterations(&self) -> usize {
        self.state.iter
    }
}

fn record(
    state: &AdmmState,
    steering: &SteeringSet,
    d: &DesiredPattern,
    params: &SolverParams,
    w_change: f64,
) -> Result<IterationRecord> {
    let pattern = beampattern(steering, &state.w)?;
    Ok(IterationRecord {
        iter: state.iter,
        objective: objective_value(steering, &state.w, state.alpha, d, params)?,
        lagrangian: augmented_lagrangian(state, steering, d, params)?,
        primal_residual: (state.w.values() - &state.v).norm(),
        alpha: state.alpha,
        matching_error_db: matching_error_db(&pattern, state.alpha, d).unwrap_or(f64::NAN),
        w_change,
    })
}

fn step(
    state: &AdmmState,
    steering: &SteeringSet,
    d: &DesiredPattern,
    params: &SolverParams,
    observer: &mut impl FnMut(&StepView<'_>),
) -> Result<AdmmState> {
    let r = inner_products(steering, state.w.values(), &state.v)?;
    let alpha = update_alpha(&r, d)?;
    let v = update_v(steering, state.w.values(), &state.u, alpha, d, params)?;
    let majorizer = majorizer_diag(&state.w)?;
    let w_hat = solve_w_unprojected(steering, &v, &state.u, alpha, d, &majorizer, params)?;
    let w = WeightVector::from_projection(&w_hat)?;
    let u = update_dual(&state.u, w.values(), &v)?;
    let next = AdmmState {
        alpha,
        v: v.clone(),
        w,
        u,
        iter: state.iter + 1,
    };
    observer(&StepView {
        prev: state,
        alpha,
        v: &v,
        majorizer: &majorizer,
        w_hat: &w_hat,
        next: &next,
    });
    Ok(next)
}

/// Runs the outer loop until `‖w⁺ − w‖₂ ≤ η` or `max_iters` iterations.
///
/// Without `init`, the start point is [`AdmmState::random`] with `params.seed`.
/// The trace starts with the initial state as record 0.
pub fn solve(
    steering: &SteeringSet,
    d: &DesiredPattern,
    params: &SolverParams,
    init: Option<AdmmState>,
) -> Result<SolveOutcome> {
    solve_with_observer(steering, d, params, init, |_| {})
}

/// [`solve`] with a callback invoked after every completed iteration.
pub fn solve_with_observer(
    steering: &SteeringSet,
    d: &DesiredPattern,
    params: &SolverParams,
    init: Option<AdmmState>,
    mut observer: impl FnMut(&StepView<'_>),
) -> Result<SolveOutcome> {
    params.validate()?;
    check_dims(steering, d)?;
    let mut state = match init {
        Some(s) => s,
        None => AdmmState::random(steering.n_elements(), params.seed)?,
    };
    steering.check_len(state.w.values(), "initial w")?;
    steering.check_len(&state.v, "initial v")?;
    steering.check_len(&state.u, "initial u")?;

    let mut trace = vec![record(&state, steering, d, params, 0.0)?];
    let mut converged = false;
    while state.iter < params.max_iters {
        let diverged = |reason: String, trace: Vec<IterationRecord>| Error::Diverged {
            iter: state.iter + 1,
            reason,
            trace,
        };
        let next = match step(&state, steering, d, params, &mut observer) {
            Ok(next) => next,
            Err(e) => return Err(diverged(e.to_string(), trace)),
        };
        if !next.is_finite() {
            return Err(diverged("non-finite iterate".into(), trace));
        }
        let w_change = (next.w.values() - state.w.values()).norm();
        match record(&next, steering, d, params, w_change) {
            Ok(rec) => trace.push(rec),
            Err(e) => return Err(diverged(e.to_string(), trace)),
        }
        state = next;
        if w_change <= params.eta {
            converged = true;
            break;
        }
    }

    Ok(SolveOutcome {
        w: state.w.clone(),
        alpha: state.alpha,
        trace,
        converged,
        state,
    })
}
