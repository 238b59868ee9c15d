//! Small QR kernels: the two-column rank-revealing start and a thin
//! orthonormalization used by the diagnostics.

use super::matrix::Matrix;
use super::mgs::mgs_project;
use super::vector::{div_in_place, norm2};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

/// Default relative drop tolerance of [`two_column_rrqr`].
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct TwoColumnQr<T> {
    /// `n × alpha`, orthonormal columns.
    pub q: Matrix<T>,
    /// `alpha × 2` with `[r_m1 r_0] = q·x`.
    pub x: Matrix<T>,
    pub alpha: usize,
}

/// Rank-revealing QR of `[r_m1 r_0]`.
///
/// `r_m1` is taken first unless it is negligible next to `r_0`, which keeps
/// `x(:,0) = (‖r_m1‖, 0)` in the generic case. The second column survives
/// when its residual exceeds `rank_tol` times the larger column norm.
pub fn two_column_rrqr<T: Scalar>(r_m1: &[T], r_0: &[T], rank_tol: f64) -> Result<TwoColumnQr<T>> {
    let n = r_0.len();
    if r_m1.len() != n {
        return Err(Error::invalid(format!(
            "r_m1 has length {} but r_0 has length {n}",
            r_m1.len()
        )));
    }
    let nm1 = norm2(r_m1);
    let n0 = norm2(r_0);
    let big = nm1.max(n0);
    if big == 0.0 {
        return Err(Error::invalid("both start vectors are zero"));
    }
    let m1_first = nm1 > rank_tol * n0;
    let (first, second, nf) = if m1_first {
        (r_m1, r_0, nm1)
    } else {
        (r_0, r_m1, n0)
    };
    let mut q1 = first.to_vec();
    div_in_place(&mut q1, nf);
    let mut q = Matrix::column_vector(&q1);
    let p = mgs_project(&q, second, 1)?;
    // entries of the pivot column and of the other column, pivot order
    let mut x_first = vec![T::from_real(nf)];
    let mut x_second = vec![p.coeffs[0]];
    let alpha = if p.beta > rank_tol * big {
        let mut q2 = p.residual;
        div_in_place(&mut q2, p.beta);
        q.push_column(&q2);
        x_first.push(T::zero());
        x_second.push(T::from_real(p.beta));
        2
    } else {
        1
    };
    Ok(assemble(q, x_first, x_second, m1_first, alpha))
}

fn assemble<T: Scalar>(
    q: Matrix<T>,
    x_first: Vec<T>,
    x_second: Vec<T>,
    m1_first: bool,
    alpha: usize,
) -> TwoColumnQr<T> {
    let cols = if m1_first {
        [x_first, x_second]
    } else {
        [x_second, x_first]
    };
    TwoColumnQr {
        q,
        x: Matrix::from_columns(alpha, &cols),
        alpha,
    }
}

/// Thin orthonormal basis of `range(a)` by Gram-Schmidt with one
/// reorthogonalization pass. Columns whose residual falls below
/// `n·ε·‖a‖_F` are dropped; the indices of the kept columns are returned.
pub fn orthonormalize<T: Scalar>(a: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let floor = a.rows().max(1) as f64 * UNIT_ROUNDOFF * a.frobenius_norm();
    let mut q = Matrix::zeros(a.rows(), 0);
    let mut kept = Vec::new();
    for (j, c) in a.column_iter().enumerate() {
        if q.cols() == a.rows() {
            break;
        }
        let p = mgs_project(&q, c, 1).expect("shapes agree by construction");
        if p.beta > floor && p.beta > 0.0 {
            let mut v = p.residual;
            div_in_place(&mut v, p.beta);
            q.push_column(&v);
            kept.push(j);
        }
    }
    (q, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector::unit;

    #[test]
    fn independent_pair() {
        let f = two_column_rrqr::<f64>(&unit(3, 0), &unit(3, 1), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.alpha, 2);
        assert_eq!(f.x, Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]));
    }

    #[test]
    fn collinear_pair() {
        let f = two_column_rrqr(&[2.0, 0.0], &[3.0, 0.0], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.alpha, 1);
        assert_eq!(f.q.col(0), &[1.0, 0.0]);
        assert_eq!(f.x, Matrix::from_rows(&[vec![2.0, 3.0]]));
    }

    #[test]
    fn zero_first_column() {
        let f = two_column_rrqr(&[0.0; 3], &[3.0, 4.0, 0.0], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.alpha, 1);
        let q = f.q.col(0);
        assert!((q[0] - 0.6).abs() < 1e-16 && (q[1] - 0.8).abs() < 1e-16 && q[2] == 0.0);
        assert_eq!(f.x, Matrix::from_rows(&[vec![0.0, 5.0]]));
    }

    #[test]
    fn both_zero_rejected() {
        assert!(two_column_rrqr(&[0.0; 2], &[0.0; 2], DEFAULT_RANK_TOL).is_err());
        assert!(two_column_rrqr(&[0.0; 2], &[1.0; 3], DEFAULT_RANK_TOL).is_err());
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 0.0, 0.0]]);
        let (q, kept) = orthonormalize(&a);
        assert_eq!(kept, vec![0, 2]);
        assert!(q.orthonormality_loss() < 1e-15);
    }
}
