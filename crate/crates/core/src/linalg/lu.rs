//! LU factorization with partial pivoting.

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reciprocal condition numbers below this are reported as ill-conditioned.
pub const RCOND_WARN: f64 = 1e-15;

/// `P·A = L·U` packed in one matrix, unit lower triangle implicit.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: Matrix<T>,
    /// `perm[i]` is the original row now in position `i`.
    perm: Vec<usize>,
    anorm1: f64,
    rcond: f64,
}

impl<T: Scalar> LuFactors<T> {
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::invalid(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_finite() {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if pmax == 0.0 {
                return Err(Error::SingularMatrix { column: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let piv = lu[(k, k)];
            for v in &mut lu.col_mut(k)[k + 1..] {
                *v = v.quot(piv);
            }
            for j in k + 1..n {
                let (lk, cj) = lu.col_pair_mut(k, j);
                let ukj = cj[k];
                if ukj == T::zero() {
                    continue;
                }
                for (x, &l) in cj[k + 1..].iter_mut().zip(&lk[k + 1..]) {
                    *x -= l * ukj;
                }
            }
        }
        let mut f = LuFactors {
            lu,
            perm,
            anorm1: a.norm1(),
            rcond: 0.0,
        };
        f.rcond = f.estimate_rcond();
        if f.rcond < RCOND_WARN {
            log::warn!(
                "ill-conditioned matrix: estimated reciprocal condition {:.3e}",
                f.rcond
            );
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Estimated reciprocal 1-norm condition number.
    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.rcond < RCOND_WARN
    }

    /// Solves `A·x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::invalid(format!(
                "right-hand side has length {} but the matrix is {n}x{n}",
                b.len()
            )));
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for j in 0..n {
            let xj = x[j];
            if xj != T::zero() {
                for i in j + 1..n {
                    x[i] -= self.lu[(i, j)] * xj;
                }
            }
        }
        for j in (0..n).rev() {
            x[j] = x[j].quot(self.lu[(j, j)]);
            let xj = x[j];
            if xj != T::zero() {
                for i in 0..j {
                    x[i] -= self.lu[(i, j)] * xj;
                }
            }
        }
        Ok(x)
    }

    /// Solves `Aᴴ·x = b`.
    pub fn solve_adjoint(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::invalid("right-hand side length mismatch"));
        }
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ z = b, Lᴴ w = z, x = Pᵀ w.
        let mut z = b.to_vec();
        for j in 0..n {
            let mut s = z[j];
            for i in 0..j {
                s -= self.lu[(i, j)].conj() * z[i];
            }
            z[j] = s.quot(self.lu[(j, j)].conj());
        }
        for j in (0..n).rev() {
            let mut s = z[j];
            for i in j + 1..n {
                s -= self.lu[(i, j)].conj() * z[i];
            }
            z[j] = s;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        Ok(x)
    }

    pub fn solve_matrix(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let mut out = Matrix::zeros(b.rows(), 0);
        for c in b.column_iter() {
            out.push_column(&self.solve(c)?);
        }
        Ok(out)
    }

    // Hager's 1-norm estimator of ‖A⁻¹‖₁ with Higham's safeguard vector.
    fn estimate_rcond(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        if self.anorm1 == 0.0 {
            return 0.0;
        }
        let one_norm = |v: &[T]| v.iter().map(|x| x.abs()).sum::<f64>();
        let mut x = vec![T::from_real(1.0 / n as f64); n];
        let mut est = 0.0f64;
        let mut last = usize::MAX;
        for _ in 0..5 {
            let y = match self.solve(&x) {
                Ok(y) => y,
                Err(_) => return 0.0,
            };
            let ny = one_norm(&y);
            if !ny.is_finite() {
                return 0.0;
            }
            if ny <= est {
                break;
            }
            est = ny;
            let xi: Vec<T> = y.iter().map(|v| v.phase()).collect();
            let z = match self.solve_adjoint(&xi) {
                Ok(z) => z,
                Err(_) => return 0.0,
            };
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * *b).re()).sum();
            if zmax <= ztx || jmax == last {
                break;
            }
            last = jmax;
            x = vec![T::zero(); n];
            x[jmax] = T::one();
        }
        let alt: Vec<T> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
                T::from_real(sign * (1.0 + i as f64 / denom))
            })
            .collect();
        if let Ok(y) = self.solve(&alt) {
            let cand = 2.0 * one_norm(&y) / (3.0 * n as f64);
            if cand.is_finite() {
                est = est.max(cand);
            }
        }
        if est == 0.0 || !est.is_finite() {
            0.0
        } else {
            1.0 / (self.anorm1 * est)
        }
    }
}

/// One-shot factor and solve.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    LuFactors::factor(a)?.solve(b)
}
