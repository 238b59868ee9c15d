//! Modified Gram-Schmidt projection with optional reorthogonalization.

use super::matrix::Matrix;
use super::vector::{axpy, dot, norm2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Projection<T> {
    /// Accumulated coefficients `basisᴴ·r` over all passes.
    pub coeffs: Vec<T>,
    pub residual: Vec<T>,
    /// 2-norm of `residual`.
    pub beta: f64,
}

/// Projects `r` out of `span(basis)` one column at a time.
///
/// `reorth_passes` extra sweeps are run over the residual; their coefficients
/// are added to those of the first sweep, so `r = basis·coeffs + residual`
/// holds to rounding regardless of the pass count.
pub fn mgs_project<T: Scalar>(
    basis: &Matrix<T>,
    r: &[T],
    reorth_passes: usize,
) -> Result<Projection<T>> {
    if basis.rows() != r.len() {
        return Err(Error::invalid(format!(
            "basis has {} rows but vector has length {}",
            basis.rows(),
            r.len()
        )));
    }
    if basis.cols() > r.len() {
        return Err(Error::invalid(format!(
            "{} basis columns exceed the dimension {}",
            basis.cols(),
            r.len()
        )));
    }
    if reorth_passes > 2 {
        return Err(Error::invalid("reorth_passes must be 0, 1 or 2"));
    }
    let mut residual = r.to_vec();
    let mut coeffs = vec![T::zero(); basis.cols()];
    for _ in 0..=reorth_passes {
        for (i, q) in basis.column_iter().enumerate() {
            let c = dot(q, &residual);
            axpy(-c, q, &mut residual);
            coeffs[i] += c;
        }
    }
    let beta = norm2(&residual);
    Ok(Projection {
        coeffs,
        residual,
        beta,
    })
}
