//! Dense-matrix oracles shared by the integration suites.
//!
//! Everything here materializes `A_k = a_k a_k^H` explicitly and never calls
//! the solver's own system assembly, so it checks the rank-1 / Toeplitz paths
//! independently.
#![allow(dead_code)]

use beamsparse::admm::SolverParams;
use beamsparse::array_model::{build_steering_set, AngleGrid, ArrayGeometry, CVector, SteeringSet};
use beamsparse::entropy_majorizer::MajorizerDiag;
use beamsparse::pattern_template::DesiredPattern;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;

pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_cvec(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_unit(rng: &mut impl Rng, n: usize) -> CVector {
    let x = random_cvec(rng, n);
    let norm = x.norm();
    x.unscale(norm)
}

pub fn dense_a(a: &CVector) -> CMatrix {
    a * a.adjoint()
}

/// `w^H A v`.
pub fn dense_bilinear(a: &CVector, w: &CVector, v: &CVector) -> Complex64 {
    (w.adjoint() * dense_a(a) * v)[(0, 0)]
}

/// `λ Σ_k A_k^H x x^H A_k`.
pub fn dense_xi(steering: &SteeringSet, x: &CVector, lambda: f64) -> CMatrix {
    let n = steering.n_elements();
    let mut acc = CMatrix::zeros(n, n);
    for a in steering.vectors() {
        let big_a = dense_a(a);
        let b = big_a.adjoint() * x;
        acc += &b * b.adjoint();
    }
    acc * Complex64::from(lambda)
}

/// `λα Σ_k d_k A_k`.
pub fn dense_upsilon(steering: &SteeringSet, alpha: f64, d: &DesiredPattern, lambda: f64) -> CMatrix {
    let n = steering.n_elements();
    let mut acc = CMatrix::zeros(n, n);
    for (a, &dk) in steering.vectors().iter().zip(d.values()) {
        acc += dense_a(a) * Complex64::from(dk);
    }
    acc * Complex64::from(lambda * alpha)
}

fn identity(n: usize, scale: f64) -> CMatrix {
    CMatrix::identity(n, n) * Complex64::from(scale)
}

pub fn diag_matrix(m: &MajorizerDiag) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        m.diag.len(),
        m.diag.iter().map(|&d| Complex64::from(d)),
    ))
}

/// Relative residual of the v-block stationarity condition
/// `Ξ₂ v − Υ₂ w + (ρ/2)(v − (w + u)) = 0`.
pub fn v_stationarity_residual(
    steering: &SteeringSet,
    w: &CVector,
    u: &CVector,
    v: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    params: &SolverParams,
) -> f64 {
    let n = steering.n_elements();
    let xi = dense_xi(steering, w, params.lambda);
    let ups = dense_upsilon(steering, alpha, d, params.lambda);
    let half = Complex64::from(0.5 * params.rho);
    let rhs = &ups * w + (w + u) * half;
    let lhs = (&xi + identity(n, 0.5 * params.rho)) * v;
    (lhs - &rhs).norm() / rhs.norm()
}

/// Relative residual of the w-subproblem stationarity condition
/// `Ξ₃ ŵ − Υ₃ v + D_t ŵ + (ρ/2)(ŵ − (v − u)) = 0`.
pub fn w_stationarity_residual(
    steering: &SteeringSet,
    v: &CVector,
    u: &CVector,
    w_hat: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    m: &MajorizerDiag,
    params: &SolverParams,
) -> f64 {
    let xi3 = w_system_matrix(steering, v, m, params);
    let ups = dense_upsilon(steering, alpha, d, params.lambda);
    let half = Complex64::from(0.5 * params.rho);
    let rhs = &ups * v + (v - u) * half;
    (xi3 * w_hat - &rhs).norm() / rhs.norm()
}

/// `Ξ₃ + D_t + (ρ/2)I`, built densely with `Ξ₃ = λ Σ_k A_k v v^H A_k^H`.
pub fn w_system_matrix(steering: &SteeringSet, v: &CVector, m: &MajorizerDiag, params: &SolverParams) -> CMatrix {
    let n = steering.n_elements();
    let mut xi3 = CMatrix::zeros(n, n);
    for a in steering.vectors() {
        let c = dense_a(a) * v;
        xi3 += &c * c.adjoint();
    }
    xi3 * Complex64::from(params.lambda) + diag_matrix(m) + identity(n, 0.5 * params.rho)
}

/// `Ξ₂ + (ρ/2)I`.
pub fn v_system_matrix(steering: &SteeringSet, w: &CVector, params: &SolverParams) -> CMatrix {
    dense_xi(steering, w, params.lambda) + identity(steering.n_elements(), 0.5 * params.rho)
}

/// `λ φ(α, v, w) + (ρ/2)‖w − v + u‖²` as a function of `v`.
pub fn v_block_objective(
    steering: &SteeringSet,
    w: &CVector,
    u: &CVector,
    v: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    params: &SolverParams,
) -> f64 {
    let fit: f64 = steering
        .vectors()
        .iter()
        .zip(d.values())
        .map(|(a, &dk)| (dense_bilinear(a, w, v) - Complex64::from(alpha * dk)).norm_sqr())
        .sum();
    params.lambda * fit + 0.5 * params.rho * (w - v + u).norm_squared()
}

/// Majorized w-subproblem objective `λ φ + w^H D_t w + (ρ/2)‖w − v + u‖²`.
pub fn w_block_objective(
    steering: &SteeringSet,
    v: &CVector,
    u: &CVector,
    w: &CVector,
    alpha: f64,
    d: &DesiredPattern,
    m: &MajorizerDiag,
    params: &SolverParams,
) -> f64 {
    let fit: f64 = steering
        .vectors()
        .iter()
        .zip(d.values())
        .map(|(a, &dk)| (dense_bilinear(a, w, v) - Complex64::from(alpha * dk)).norm_sqr())
        .sum();
    let quad: f64 = m.diag.iter().zip(w.iter()).map(|(g, z)| g * z.norm_sqr()).sum();
    params.lambda * fit + quad + 0.5 * params.rho * (w - v + u).norm_squared()
}

/// Minimizes `Σ_k |r_k − α d_k|²` by bracketing then golden-section search.
pub fn golden_section_alpha(r: &[Complex64], d: &[f64]) -> f64 {
    let f = |alpha: f64| -> f64 {
        r.iter()
            .zip(d)
            .map(|(rk, &dk)| (rk - Complex64::from(alpha * dk)).norm_sqr())
            .sum()
    };
    // Coarse scan for a bracket.
    let span = r.iter().map(|z| z.norm()).sum::<f64>() / d.iter().cloned().fold(f64::MIN, f64::max) + 1.0;
    let steps = 2000;
    let mut best = -span;
    for i in 0..=steps {
        let a = -span + 2.0 * span * i as f64 / steps as f64;
        if f(a) < f(best) {
            best = a;
        }
    }
    let h = 2.0 * span / steps as f64;
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    0.5 * (lo + hi)
}

/// Small random problem: `n` elements, `k` random distinct angles, a
/// non-negative template with at least one positive entry.
pub struct Instance {
    pub steering: SteeringSet,
    pub template: DesiredPattern,
}

pub fn random_instance(rng: &mut impl Rng, n: usize, k: usize) -> Instance {
    let geometry = ArrayGeometry::new(n, rng.random_range(0.25..0.75)).unwrap();
    let mut angles: Vec<f64> = Vec::new();
    while angles.len() < k {
        let t: f64 = rng.random_range(-90.0..=90.0);
        if angles.iter().all(|&x| (x - t).abs() > 1e-3) {
            angles.push(t);
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let grid = AngleGrid::new(angles).unwrap();
    let steering = build_steering_set(&geometry, &grid).unwrap();
    let mut values: Vec<f64> = (0..k)
        .map(|_| if rng.random_bool(0.5) { rng.random_range(0.5..20.0) } else { 0.0 })
        .collect();
    values[rng.random_range(0..k)] = rng.random_range(0.5..20.0);
    let mask = values.iter().map(|&v| v > 0.0).collect();
    let template = DesiredPattern::from_parts(values, mask).unwrap();
    Instance { steering, template }
}

pub mod suites;
