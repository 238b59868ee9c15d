//! Largest principal angle between subspaces.

use std::f64::consts::FRAC_PI_2;

use super::matrix::Matrix;
use super::qr::orthonormalize;
use super::svd::{norm_2, svd_metrics};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest principal angle of `span(a)` against `span(b)`, in radians.
///
/// Both inputs are orthonormalized first. When `a` spans more directions than
/// `b` the answer is `π/2`. Small angles come from the sine formula, which
/// keeps them accurate down to rounding.
pub fn principal_angle<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<f64> {
    if a.rows() != b.rows() {
        return Err(Error::invalid(format!(
            "row counts differ: {} vs {}",
            a.rows(),
            b.rows()
        )));
    }
    let (qa, _) = orthonormalize(a);
    let (qb, _) = orthonormalize(b);
    if qa.cols() == 0 {
        return Ok(0.0);
    }
    if qa.cols() > qb.cols() {
        return Ok(FRAC_PI_2);
    }
    let proj = qb.adjoint_matmul(&qa);
    let sin = norm_2(&qa.sub(&qb.matmul(&proj))).min(1.0);
    if sin < 0.5 {
        return Ok(sin.asin());
    }
    let cos = svd_metrics(&proj).sigma_min.min(1.0);
    Ok(cos.acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::rng::Lcg;
    use crate::linalg::vector::unit;

    #[test]
    fn coordinate_axes() {
        let e1 = Matrix::column_vector(&unit::<f64>(3, 0));
        let e2 = Matrix::column_vector(&unit::<f64>(3, 1));
        assert_eq!(principal_angle(&e1, &e1).unwrap(), 0.0);
        assert!((principal_angle(&e1, &e2).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn rotated_basis_spans_the_same_space() {
        let mut rng = Lcg::new(5);
        let (q, _) = orthonormalize(&rng.matrix(12, 4));
        let (rot, _) = orthonormalize(&rng.matrix(4, 4));
        let b = q.matmul(&rot);
        assert!(principal_angle(&q, &b).unwrap() <= 1e-14);
    }

    #[test]
    fn known_angle_and_subset() {
        let t: f64 = 0.3;
        let a = Matrix::column_vector(&[t.cos(), t.sin(), 0.0]);
        let b = Matrix::column_vector(&[1.0, 0.0, 0.0]);
        assert!((principal_angle(&a, &b).unwrap() - t).abs() < 1e-15);
        let big = Matrix::identity(3).columns(0..2);
        assert!(principal_angle(&a, &big).unwrap() < 1e-15);
        assert!((principal_angle(&big, &a).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(principal_angle(&a, &Matrix::identity(2)).is_err());
    }
}
