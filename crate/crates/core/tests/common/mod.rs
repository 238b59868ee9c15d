#![allow(dead_code)]

use nalgebra::DMatrix;
use sokr::io::Lcg;
use sokr::{Matrix, Scalar};

pub struct Instance {
    pub a: Matrix<f64>,
    pub b: Matrix<f64>,
    pub r_m1: Vec<f64>,
    pub r_0: Vec<f64>,
}

/// Dense `U(-1, 1)` operators and start vectors, drawn in the order A, B, r_{-1}, r_0.
pub fn random_instance(seed: u64, n: usize) -> Instance {
    let mut rng = Lcg::new(seed);
    let a = rng.matrix(n, n);
    let b = rng.matrix(n, n);
    let r_m1 = rng.vector(n);
    let r_0 = rng.vector(n);
    Instance { a, b, r_m1, r_0 }
}

/// The seed-2024, n = 30 instance used by the oracle-equivalence checks.
pub fn reference_instance() -> Instance {
    random_instance(2024, 30)
}

/// Block upper triangular pair whose leading `m`-dimensional coordinate
/// block is invariant up to a coupling of size `eps`; the start vectors
/// live in that block, so the Krylov space nearly deflates after `m`
/// directions and the U factors become ill conditioned.
pub fn near_deflation_instance(eps: f64) -> Instance {
    let (n, m) = (30, 4);
    let mut rng = Lcg::new(77);
    let mut a = rng.matrix(n, n);
    let mut b = rng.matrix(n, n);
    for j in 0..m {
        for i in m..n {
            a[(i, j)] *= eps;
            b[(i, j)] *= eps;
        }
    }
    let mut r_m1 = rng.vector(n);
    let mut r_0 = rng.vector(n);
    for i in m..n {
        r_m1[i] = 0.0;
        r_0[i] = 0.0;
    }
    Instance { a, b, r_m1, r_0 }
}

pub fn to_na<T: Scalar + nalgebra::Scalar>(m: &Matrix<T>) -> DMatrix<T> {
    DMatrix::from_column_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na<T: Scalar + nalgebra::Scalar>(m: &DMatrix<T>) -> Matrix<T> {
    Matrix::from_col_major(m.nrows(), m.ncols(), m.as_slice().to_vec()).unwrap()
}

/// Largest principal angle between column spans, from nalgebra SVDs.
pub fn na_principal_angle(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let basis = |m: &DMatrix<f64>| {
        let svd = m.clone().svd(true, false);
        let u = svd.u.unwrap();
        let smax = svd.singular_values.max();
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > smax * 1e-12)
            .collect();
        u.select_columns(&keep)
    };
    let (qx, qy) = (basis(x), basis(y));
    let (small, big) = if qx.ncols() <= qy.ncols() { (qx, qy) } else { (qy, qx) };
    let resid = &small - &big * (big.transpose() * &small);
    resid.svd(false, false).singular_values.max().min(1.0).asin()
}
