//! Randomized oracle sweeps returning worst-case discrepancies.

use beamsparse::admm::{self, SolverParams};
use beamsparse::array_model::{beampattern, CVector, WeightVector};
use beamsparse::entropy_majorizer::{
    entropy, entropy_gradient, majorizer_diag, majorizer_value, PowerVector,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

/// Unit-norm vector whose powers are all at least `floor`.
pub fn random_unit_with_floor(rng: &mut impl Rng, n: usize, floor: f64) -> CVector {
    loop {
        let x = random_unit(rng, n);
        if x.iter().all(|z| z.norm_sqr() >= floor) {
            return x;
        }
    }
}

/// Random point on the simplex with a random number of exactly-zero entries.
fn random_sparse_unit(rng: &mut impl Rng, n: usize) -> CVector {
    let mut x = random_cvec(rng, n);
    let zeros = rng.random_range(0..n);
    for _ in 0..zeros {
        let i = rng.random_range(0..n);
        x[i] = Complex64::new(0.0, 0.0);
    }
    if x.norm() == 0.0 {
        x[0] = Complex64::new(1.0, 0.0);
    }
    let norm = x.norm();
    x.unscale(norm)
}

#[derive(Debug, Default)]
pub struct MajorizerStats {
    pub pairs: usize,
    /// Largest `entropy(w) − bound(w)`; non-positive when majorization holds.
    pub worst_majorization_gap: f64,
    pub worst_tangency: f64,
    pub worst_gradient_rel: f64,
    pub worst_entropy_range_excess: f64,
}

/// `g(p) = −Σ p ln p`, written out independently of the library.
fn g(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

pub fn majorizer_suite(seed: u64, pairs: usize) -> MajorizerStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = MajorizerStats {
        pairs,
        worst_majorization_gap: f64::NEG_INFINITY,
        ..Default::default()
    };
    for i in 0..pairs {
        let n = 2 + i % 31;
        let anchor = WeightVector::normalized(random_unit_with_floor(&mut rng, n, 1e-6 / n as f64)).unwrap();
        let w = if i % 4 == 0 {
            random_sparse_unit(&mut rng, n)
        } else {
            random_unit(&mut rng, n)
        };
        let w = WeightVector::from_projection(&w).unwrap();
        let m = majorizer_diag(&anchor).unwrap();

        let f_w = entropy(&w).unwrap();
        let bound = majorizer_value(&w, &m).unwrap();
        stats.worst_majorization_gap = stats.worst_majorization_gap.max(f_w - bound);

        let tangency = (majorizer_value(&anchor, &m).unwrap() - entropy(&anchor).unwrap()).abs();
        stats.worst_tangency = stats.worst_tangency.max(tangency);

        let excess = (f_w - (n as f64).ln()).max(-f_w);
        stats.worst_entropy_range_excess = stats.worst_entropy_range_excess.max(excess);

        // Central differences of g at an interior point, one coordinate at a time.
        let p: Vec<f64> = anchor.powers();
        if p.iter().all(|&x| x >= 1e-6) {
            let grad = entropy_gradient(&PowerVector::new(p.clone()).unwrap());
            for j in 0..n {
                let h = 1e-4 * p[j];
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus[j] += h;
                minus[j] -= h;
                let fd = (g(&plus) - g(&minus)) / (2.0 * h);
                let rel = (fd - grad[j]).abs() / grad[j].abs().max(1.0);
                stats.worst_gradient_rel = stats.worst_gradient_rel.max(rel);
            }
        }
    }
    stats
}

#[derive(Debug, Default)]
pub struct BlockStats {
    pub instances: usize,
    pub worst_alpha_err: f64,
    pub worst_v_residual: f64,
    pub worst_w_residual: f64,
    pub worst_beampattern_rel: f64,
    pub worst_inner_product_rel: f64,
}

pub fn block_suite(seed: u64, instances: usize, n: usize, k: usize) -> BlockStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = BlockStats {
        instances,
        ..Default::default()
    };
    for _ in 0..instances {
        let inst = random_instance(&mut rng, n, k);
        let s = &inst.steering;
        let d = &inst.template;
        let params = SolverParams {
            lambda: rng.random_range(0.01..1.0),
            rho: rng.random_range(2.5..50.0),
            ..Default::default()
        };
        let w = random_unit(&mut rng, n);
        let v = random_cvec(&mut rng, n);
        let u = random_cvec(&mut rng, n) * Complex64::from(0.1);

        let r = admm::inner_products(s, &w, &v).unwrap();
        for (a, rk) in s.vectors().iter().zip(&r) {
            let dense = dense_bilinear(a, &w, &v);
            let rel = (rk - dense).norm() / dense.norm().max(1e-12);
            stats.worst_inner_product_rel = stats.worst_inner_product_rel.max(rel);
        }

        let pattern = beampattern(s, &WeightVector::new(w.clone())).unwrap();
        for (a, pk) in s.vectors().iter().zip(&pattern) {
            let dense = dense_bilinear(a, &w, &w).re;
            let rel = (pk - dense).abs() / dense.abs().max(1e-12);
            stats.worst_beampattern_rel = stats.worst_beampattern_rel.max(rel);
        }

        let alpha = admm::update_alpha(&r, d).unwrap();
        let oracle = golden_section_alpha(&r, d.values());
        stats.worst_alpha_err = stats.worst_alpha_err.max((alpha - oracle).abs());

        let v_new = admm::update_v(s, &w, &u, alpha, d, &params).unwrap();
        stats.worst_v_residual = stats
            .worst_v_residual
            .max(v_stationarity_residual(s, &w, &u, &v_new, alpha, d, &params));

        let m = majorizer_diag(&WeightVector::normalized(w.clone()).unwrap()).unwrap();
        let w_hat = admm::solve_w_unprojected(s, &v_new, &u, alpha, d, &m, &params).unwrap();
        stats.worst_w_residual = stats
            .worst_w_residual
            .max(w_stationarity_residual(s, &v_new, &u, &w_hat, alpha, d, &m, &params));
    }
    stats
}
