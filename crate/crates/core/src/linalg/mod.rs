//! Dense real/complex kernels.

pub mod angle;
pub mod lu;
pub mod matrix;
pub mod mgs;
pub mod qr;
pub mod svd;
pub mod vector;

pub use angle::principal_angle;
pub use lu::{lu_solve, LuFactors};
pub use matrix::{ComplexMatrix, DenseMatrix, Matrix};
pub use mgs::{mgs_project, Projection};
pub use qr::{orthonormalize, two_column_rrqr, TwoColumnQr, DEFAULT_RANK_TOL};
pub use svd::{norm_2, pinv, svd, svd_metrics, PseudoInverse, Svd, SvdMetrics};
