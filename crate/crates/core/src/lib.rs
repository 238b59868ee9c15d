//! Orthonormal bases of second-order Krylov subspaces
//! `span{r_{-1}, r_0, r_1, …}` with `r_j = A·r_{j-1} + B·r_{j-2}`, built in
//! compact form by TOAR and by the improved two-level variant I-TOAR, with
//! backward-error diagnostics and Galerkin reduction of second-order systems.

pub mod diagnostics;
pub mod error;
pub mod factorization;
pub mod io;
pub mod itoar;
pub mod linalg;
pub mod mor;
pub mod scalar;
pub mod toar;

pub use error::{Error, Result};
pub use factorization::{
    init_factorization, ArnoldiOptions, CompactArnoldiFactorization, Method, OperatorPair, Status,
    StepKind, StepOutcome, Variant,
};
pub use itoar::{itoar_run, itoar_step};
pub use linalg::{ComplexMatrix, DenseMatrix, Matrix};
pub use scalar::{Complex64, Scalar};
pub use toar::{toar_run, toar_step};

/// Runs `method`; for I-TOAR the variant in `method` overrides `opts.variant`.
pub fn build_basis<T: Scalar>(
    method: Method,
    ops: &OperatorPair<T>,
    r_m1: &[T],
    r_0: &[T],
    k_target: usize,
    opts: &ArnoldiOptions,
) -> Result<CompactArnoldiFactorization<T>> {
    match method {
        Method::Itoar(variant) => itoar_run(ops, r_m1, r_0, k_target, &ArnoldiOptions { variant, ..opts.clone() }),
        Method::Toar => toar_run(ops, r_m1, r_0, k_target, opts),
    }
}
