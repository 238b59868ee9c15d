//! Thin SVD by one-sided (Hestenes) Jacobi rotations.

use super::matrix::Matrix;
use super::vector::{dot, norm2};
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

const MAX_SWEEPS: usize = 80;

/// `A = U·diag(sigma)·Vᴴ`, sigma sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub sigma: Vec<f64>,
    pub v: Matrix<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdMetrics {
    pub sigma_max: f64,
    pub sigma_min: f64,
    /// `sigma_max / sigma_min`, infinite when `sigma_min = 0`.
    pub cond2: f64,
}

/// Moore-Penrose pseudo-inverse with the count of retained singular values.
#[derive(Debug, Clone)]
pub struct PseudoInverse<T> {
    pub matrix: Matrix<T>,
    pub rank: usize,
    /// At least one singular value was dropped.
    pub truncated: bool,
}

pub fn svd<T: Scalar>(a: &Matrix<T>) -> Svd<T> {
    if a.rows() < a.cols() {
        let s = svd_tall(&a.adjoint());
        return Svd {
            u: s.v,
            sigma: s.sigma,
            v: s.u,
        };
    }
    svd_tall(a)
}

fn svd_tall<T: Scalar>(a: &Matrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Matrix::<T>::identity(n);
    let tol = UNIT_ROUNDOFF * m.max(1) as f64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(w.col(p)).powi(2);
                let beta = norm2(w.col(q)).powi(2);
                let gamma = dot(w.col(p), w.col(q));
                let g = gamma.abs();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma.phase().conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, e, c, s);
                rotate(&mut v, p, q, e, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, norm2(w.col(j)))).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut u = Matrix::zeros(m, 0);
    let mut vs = Matrix::zeros(n, 0);
    let mut sigma = Vec::with_capacity(n);
    for &(j, s) in &order {
        let col: Vec<T> = if s > 0.0 {
            w.col(j).iter().map(|x| x.scale(1.0 / s)).collect()
        } else {
            vec![T::zero(); m]
        };
        u.push_column(&col);
        vs.push_column(v.col(j));
        sigma.push(s);
    }
    Svd { u, sigma, v: vs }
}

// Column q is phase-aligned by `e`, then (p, q) gets a real rotation.
fn rotate<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, e: T, c: f64, s: f64) {
    for i in 0..m.rows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)] * e;
        m[(i, p)] = xp.scale(c) - xq.scale(s);
        m[(i, q)] = xp.scale(s) + xq.scale(c);
    }
}

pub fn svd_metrics<T: Scalar>(a: &Matrix<T>) -> SvdMetrics {
    let s = svd(a);
    let sigma_max = s.sigma.first().copied().unwrap_or(0.0);
    let sigma_min = s.sigma.last().copied().unwrap_or(0.0);
    SvdMetrics {
        sigma_max,
        sigma_min,
        cond2: if sigma_min > 0.0 {
            sigma_max / sigma_min
        } else {
            f64::INFINITY
        },
    }
}

/// Spectral norm.
pub fn norm_2<T: Scalar>(a: &Matrix<T>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    svd_metrics(a).sigma_max
}

/// Pseudo-inverse dropping singular values below `sigma_max·max(m,n)·ε`.
pub fn pinv<T: Scalar>(a: &Matrix<T>) -> PseudoInverse<T> {
    let (m, n) = a.shape();
    let s = svd(a);
    let cut = s.sigma.first().copied().unwrap_or(0.0) * m.max(n) as f64 * UNIT_ROUNDOFF;
    let mut out = Matrix::zeros(n, m);
    let mut rank = 0;
    for (j, &sj) in s.sigma.iter().enumerate() {
        if sj <= cut || sj == 0.0 {
            continue;
        }
        rank += 1;
        let vj = s.v.col(j);
        let uj = s.u.col(j);
        for c in 0..m {
            let f = uj[c].conj().scale(1.0 / sj);
            for r in 0..n {
                out[(r, c)] += vj[r] * f;
            }
        }
    }
    PseudoInverse {
        matrix: out,
        rank,
        truncated: rank < m.min(n),
    }
}
