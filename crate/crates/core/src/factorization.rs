//! Compact Arnoldi state shared by TOAR and I-TOAR, plus the first-level
//! (Q-level) expansion.
//!
//! Column `j` of the orthonormal Krylov basis is
//! `v_j = (Q·U1(:,j); Q·U2(:,j))`, and the basis obeys
//! `L·V(:, 0..k-1) = V·H` with `L = [[A, B], [I, 0]]` and `H` upper
//! Hessenberg of shape `k × (k-1)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::mgs::mgs_project;
use crate::linalg::qr::{two_column_rrqr, DEFAULT_RANK_TOL};
use crate::linalg::vector::{div_in_place, norm2};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

type ApplyFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;

/// Black-box `x ↦ A·x` and `x ↦ B·x`.
#[derive(Clone)]
pub struct OperatorPair<T> {
    n: usize,
    apply_a: ApplyFn<T>,
    apply_b: ApplyFn<T>,
    dense_a: Option<Matrix<T>>,
    dense_b: Option<Matrix<T>>,
}

impl<T: Scalar> OperatorPair<T> {
    pub fn new(
        n: usize,
        apply_a: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
        apply_b: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Self {
        OperatorPair {
            n,
            apply_a: Arc::new(apply_a),
            apply_b: Arc::new(apply_b),
            dense_a: None,
            dense_b: None,
        }
    }

    pub fn from_dense(a: Matrix<T>, b: Matrix<T>) -> Result<Self> {
        let n = a.rows();
        if a.shape() != (n, n) || b.shape() != (n, n) {
            return Err(Error::invalid(format!(
                "A and B must be square of equal size, got {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        let (ca, cb) = (a.clone(), b.clone());
        Ok(OperatorPair {
            n,
            apply_a: Arc::new(move |x| ca.matvec(x)),
            apply_b: Arc::new(move |x| cb.matvec(x)),
            dense_a: Some(a),
            dense_b: Some(b),
        })
    }

    /// Attaches explicit matrices for the oracles without changing the maps.
    pub fn with_dense(mut self, a: Matrix<T>, b: Matrix<T>) -> Self {
        self.dense_a = Some(a);
        self.dense_b = Some(b);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_a(&self, x: &[T]) -> Result<Vec<T>> {
        self.checked(&self.apply_a, x, "A")
    }

    pub fn apply_b(&self, x: &[T]) -> Result<Vec<T>> {
        self.checked(&self.apply_b, x, "B")
    }

    fn checked(&self, f: &ApplyFn<T>, x: &[T], name: &str) -> Result<Vec<T>> {
        if x.len() != self.n {
            return Err(Error::invalid(format!(
                "{name} applied to a vector of length {} (expected {})",
                x.len(),
                self.n
            )));
        }
        let y = f(x);
        if y.len() != self.n {
            return Err(Error::invalid(format!(
                "{name} returned a vector of length {} (expected {})",
                y.len(),
                self.n
            )));
        }
        Ok(y)
    }

    pub fn dense(&self) -> Option<(&Matrix<T>, &Matrix<T>)> {
        Some((self.dense_a.as_ref()?, self.dense_b.as_ref()?))
    }
}

impl<T> fmt::Debug for OperatorPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorPair")
            .field("n", &self.n)
            .field("dense", &self.dense_a.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    /// Reached the requested number of basis vectors.
    Completed,
    /// `h_{j+1,j}` vanished: an invariant subspace was found.
    Breakdown,
    /// Breakdown reached after one or more deflated steps.
    DeflatedToInvariance,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Running => "running",
            Status::Completed => "completed",
            Status::Breakdown => "breakdown",
            Status::DeflatedToInvariance => "deflated-to-invariance",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Status::Running,
            Status::Completed,
            Status::Breakdown,
            Status::DeflatedToInvariance,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Second-level update formula of I-TOAR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Column-by-column weighted Gram-Schmidt.
    #[default]
    Mgs,
    /// Coefficients from the diagonal of `U2`.
    Proc1,
    /// Coefficients from the column norms of `U1`.
    Proc2,
}

/// Which procedure produced a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Itoar(Variant),
    Toar,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Itoar(Variant::Mgs) => "itoar-mgs",
            Method::Itoar(Variant::Proc1) => "itoar-proc1",
            Method::Itoar(Variant::Proc2) => "itoar-proc2",
            Method::Toar => "toar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Method::Itoar(Variant::Mgs),
            Method::Itoar(Variant::Proc1),
            Method::Itoar(Variant::Proc2),
            Method::Toar,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Expanded,
    Deflated,
    Breakdown,
}

#[derive(Debug, Clone)]
pub struct StepOutcome<T> {
    pub kind: StepKind,
    pub beta: f64,
    /// `(h_j; h_{j+1,j})`.
    pub h_col: Vec<T>,
}

/// Tolerances and switches shared by both drivers.
#[derive(Debug, Clone)]
pub struct ArnoldiOptions {
    /// Relative drop tolerance of the starting rank-revealing QR.
    pub rank_tol: f64,
    /// A step deflates when `β ≤ deflation_tol·‖r‖`.
    pub deflation_tol: f64,
    /// Breakdown when `h_{j+1,j} ≤ breakdown_tol·‖L·v_j‖`.
    pub breakdown_tol: f64,
    /// Second Gram-Schmidt pass against `Q`.
    pub reorth_first: bool,
    /// Second Gram-Schmidt pass in the coefficient space.
    pub reorth_second: bool,
    pub keep_log: bool,
    pub variant: Variant,
    /// Reproduce the published I-TOAR recurrence verbatim (orthogonalize
    /// against `U1` only and zero all but the last entry of `y`). The result
    /// keeps `V` orthonormal but is generally not an Arnoldi factorization.
    pub literal_structure: bool,
    /// Check proc1/proc2 coefficients against `U1ᴴs + U2ᴴu` and fall back
    /// to Gram-Schmidt when they disagree.
    pub verify_procedures: bool,
    /// Entries of `y` below `zero_tol·‖u‖` are set to exactly zero.
    pub zero_tol: f64,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        ArnoldiOptions {
            rank_tol: DEFAULT_RANK_TOL,
            deflation_tol: 100.0 * UNIT_ROUNDOFF,
            breakdown_tol: 100.0 * UNIT_ROUNDOFF,
            reorth_first: true,
            reorth_second: true,
            keep_log: true,
            variant: Variant::Mgs,
            literal_structure: false,
            verify_procedures: true,
            zero_tol: 100.0 * UNIT_ROUNDOFF,
        }
    }
}

/// Output of a second-level update.
#[derive(Debug, Clone)]
pub struct SecondLevelResult<T> {
    pub h: Vec<T>,
    /// Component of the new basis vector along the old `Q` (top block).
    pub x: Vec<T>,
    /// Component along the old `Q` (bottom block).
    pub y: Vec<T>,
    /// `sqrt(β² + ‖x‖² + ‖y‖²)`.
    pub h_sub: f64,
    /// Norm of the entries of `y` that were set to zero.
    pub y_defect: f64,
    pub flops: u64,
}

/// Why a requested procedure was replaced by Gram-Schmidt.
#[derive(Debug, Clone, PartialEq)]
pub enum Fallback {
    SmallDiagonal { index: usize },
    StructureViolated { defect: f64 },
}

/// Everything a step computed, kept for the diagnostics.
#[derive(Debug, Clone)]
pub struct StepRecord<T> {
    /// Computed `A·Q·U1(:,j) + B·Q·U2(:,j)`.
    pub r: Vec<T>,
    pub s: Vec<T>,
    pub u: Vec<T>,
    pub beta: f64,
    pub h_col: Vec<T>,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub h_sub: f64,
    pub kind: StepKind,
    pub fallback: Option<Fallback>,
    pub y_defect: f64,
    pub flops: u64,
}

#[derive(Debug, Clone)]
pub struct FirstLevel<T> {
    /// `Qᴴ·r`.
    pub s: Vec<T>,
    pub residual: Vec<T>,
    pub beta: f64,
    pub r_norm: f64,
    /// `residual / β`, present when the step does not deflate.
    pub q_new: Option<Vec<T>>,
}

/// `(Q, U1, U2, H)` with bookkeeping.
#[derive(Debug, Clone)]
pub struct CompactArnoldiFactorization<T> {
    pub(crate) q: Matrix<T>,
    pub(crate) u1: Matrix<T>,
    pub(crate) u2: Matrix<T>,
    pub(crate) h: Matrix<T>,
    pub(crate) alpha: Vec<usize>,
    pub(crate) gamma: f64,
    pub(crate) status: Status,
    pub(crate) method: Method,
    pub(crate) log: Vec<StepRecord<T>>,
    pub(crate) deflations: usize,
    pub(crate) log_kept: bool,
}

impl<T: Scalar> CompactArnoldiFactorization<T> {
    pub fn n(&self) -> usize {
        self.q.rows()
    }

    /// Number of basis vectors.
    pub fn k(&self) -> usize {
        self.u1.cols()
    }

    /// Rank of the first-level basis.
    pub fn eta(&self) -> usize {
        self.q.cols()
    }

    pub fn q(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn u1(&self) -> &Matrix<T> {
        &self.u1
    }

    pub fn u2(&self) -> &Matrix<T> {
        &self.u2
    }

    /// `k × (k-1)` upper Hessenberg.
    pub fn h(&self) -> &Matrix<T> {
        &self.h
    }

    /// Rank of `Q` when each basis vector was created.
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn deflations(&self) -> usize {
        self.deflations
    }

    /// Per-step records, or `None` when retention was switched off.
    pub fn step_log(&self) -> Option<&[StepRecord<T>]> {
        self.log_kept.then_some(&self.log[..])
    }

    /// `[U1; U2]`.
    pub fn stacked_u(&self) -> Matrix<T> {
        self.u1.vstack(&self.u2)
    }

    /// `V = [Q·U1; Q·U2]`, `2n × k`.
    pub fn basis(&self) -> Matrix<T> {
        self.q.matmul(&self.u1).vstack(&self.q.matmul(&self.u2))
    }

    /// Leading `k` columns seen as an earlier factorization.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.k());
        let eta = self.alpha[k - 1];
        CompactArnoldiFactorization {
            q: self.q.columns(0..eta),
            u1: self.u1.block(0..eta, 0..k),
            u2: self.u2.block(0..eta, 0..k),
            h: self.h.block(0..k, 0..k - 1),
            alpha: self.alpha[..k].to_vec(),
            gamma: self.gamma,
            status: self.status,
            method: self.method,
            log: self.log.iter().take(k - 1).cloned().collect(),
            deflations: self.log.iter().take(k - 1).filter(|r| r.kind == StepKind::Deflated).count(),
            log_kept: self.log_kept,
        }
    }

    pub(crate) fn ensure_running(&self) -> Result<()> {
        if self.status == Status::Running {
            Ok(())
        } else {
            Err(Error::NotRunning(self.status.to_string()))
        }
    }

    pub(crate) fn with_method(mut self, m: Method) -> Self {
        self.method = m;
        self
    }

    /// Assembles a factorization from parts; used by the text reader.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        q: Matrix<T>,
        u1: Matrix<T>,
        u2: Matrix<T>,
        h: Matrix<T>,
        alpha: Vec<usize>,
        gamma: f64,
        status: Status,
        method: Method,
    ) -> Result<Self> {
        let k = u1.cols();
        let eta = q.cols();
        if u1.shape() != (eta, k) || u2.shape() != (eta, k) {
            return Err(Error::invalid("U blocks must be eta x k"));
        }
        if k == 0 || h.shape() != (k, k - 1) {
            return Err(Error::invalid("H must be k x (k-1) with k >= 1"));
        }
        if alpha.len() != k || alpha.last() != Some(&eta) {
            return Err(Error::invalid("alpha must list k ranks ending at eta"));
        }
        Ok(CompactArnoldiFactorization {
            q,
            u1,
            u2,
            h,
            alpha,
            gamma,
            status,
            method,
            log: Vec::new(),
            deflations: 0,
            log_kept: false,
        })
    }
}

/// Starts the factorization from `v0 = (r_0; r_m1)`.
pub fn init_factorization<T: Scalar>(
    r_m1: &[T],
    r_0: &[T],
    rank_tol: f64,
) -> Result<CompactArnoldiFactorization<T>> {
    let gamma = (norm2(r_0).powi(2) + norm2(r_m1).powi(2)).sqrt();
    if gamma == 0.0 || r_0.len() != r_m1.len() {
        return Err(Error::invalid(if gamma == 0.0 {
            "starting vector is zero".to_string()
        } else {
            "r_m1 and r_0 differ in length".to_string()
        }));
    }
    let qr = two_column_rrqr(r_m1, r_0, rank_tol)?;
    let mut u1 = qr.x.col(1).to_vec();
    let mut u2 = qr.x.col(0).to_vec();
    div_in_place(&mut u1, gamma);
    div_in_place(&mut u2, gamma);
    Ok(CompactArnoldiFactorization {
        q: qr.q,
        u1: Matrix::column_vector(&u1),
        u2: Matrix::column_vector(&u2),
        h: Matrix::zeros(1, 0),
        alpha: vec![qr.alpha],
        gamma,
        status: Status::Running,
        method: Method::Itoar(Variant::Mgs),
        log: Vec::new(),
        deflations: 0,
        log_kept: true,
    })
}

/// `A·(Q·U1(:,j)) + B·(Q·U2(:,j))` for the last column `j`.
pub fn next_residual<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    ops: &OperatorPair<T>,
) -> Result<Vec<T>> {
    fact.ensure_running()?;
    if ops.n() != fact.n() {
        return Err(Error::invalid(format!(
            "operators act on dimension {} but Q has {} rows",
            ops.n(),
            fact.n()
        )));
    }
    let j = fact.k() - 1;
    let top = fact.q.matvec(fact.u1.col(j));
    let bot = fact.q.matvec(fact.u2.col(j));
    let a = ops.apply_a(&top)?;
    let b = ops.apply_b(&bot)?;
    Ok(a.into_iter().zip(b).map(|(x, y)| x + y).collect())
}

/// Gram-Schmidt of `r` against `Q`.
pub fn first_level_orthogonalize<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    r: &[T],
    reorth: bool,
    deflation_tol: f64,
) -> Result<FirstLevel<T>> {
    fact.ensure_running()?;
    let p = mgs_project(&fact.q, r, usize::from(reorth))?;
    let r_norm = norm2(r);
    let q_new = (p.beta > deflation_tol * r_norm && p.beta > 0.0).then(|| {
        let mut q = p.residual.clone();
        div_in_place(&mut q, p.beta);
        q
    });
    Ok(FirstLevel {
        s: p.coeffs,
        residual: p.residual,
        beta: p.beta,
        r_norm,
        q_new,
    })
}

/// One Arnoldi step with a pluggable second level.
///
/// `second` receives `(fact, s, u, β)` where `β = 0` on a deflated step and
/// returns the update plus the fallback reason, if any.
pub(crate) fn advance<T: Scalar>(
    fact: &mut CompactArnoldiFactorization<T>,
    ops: &OperatorPair<T>,
    opts: &ArnoldiOptions,
    second: impl FnOnce(
        &CompactArnoldiFactorization<T>,
        &[T],
        &[T],
        f64,
    ) -> Result<(SecondLevelResult<T>, Option<Fallback>)>,
) -> Result<StepOutcome<T>> {
    let r = next_residual(fact, ops)?;
    let first = first_level_orthogonalize(fact, &r, opts.reorth_first, opts.deflation_tol)?;
    let j = fact.k() - 1;
    let u = fact.u1.col(j).to_vec();
    let expanded = first.q_new.is_some();
    let beta_eff = if expanded { first.beta } else { 0.0 };
    let (sl, fallback) = second(fact, &first.s, &u, beta_eff)?;

    let scale = (first.r_norm.powi(2) + norm2(&u).powi(2)).sqrt();
    let kind = if !(sl.h_sub > opts.breakdown_tol * scale) {
        StepKind::Breakdown
    } else if expanded {
        StepKind::Expanded
    } else {
        StepKind::Deflated
    };
    let mut h_col = sl.h.clone();
    h_col.push(T::from_real(sl.h_sub));

    if opts.keep_log {
        fact.log.push(StepRecord {
            r,
            s: first.s,
            u,
            beta: first.beta,
            h_col: h_col.clone(),
            x: sl.x.clone(),
            y: sl.y.clone(),
            h_sub: sl.h_sub,
            kind,
            fallback,
            y_defect: sl.y_defect,
            flops: sl.flops,
        });
    }
    fact.log_kept &= opts.keep_log;

    match kind {
        StepKind::Breakdown => {
            fact.status = if fact.deflations > 0 {
                Status::DeflatedToInvariance
            } else {
                Status::Breakdown
            };
        }
        StepKind::Expanded => {
            let q_new = first.q_new.expect("expanded step has a new direction");
            fact.q.push_column(&q_new);
            fact.u1.push_zero_row();
            fact.u2.push_zero_row();
            let mut c1 = sl.x;
            c1.push(T::from_real(first.beta));
            let mut c2 = sl.y;
            c2.push(T::zero());
            push_scaled(fact, c1, c2, &h_col, sl.h_sub);
        }
        StepKind::Deflated => {
            fact.deflations += 1;
            push_scaled(fact, sl.x, sl.y, &h_col, sl.h_sub);
        }
    }
    Ok(StepOutcome {
        kind,
        beta: first.beta,
        h_col,
    })
}

fn push_scaled<T: Scalar>(
    fact: &mut CompactArnoldiFactorization<T>,
    mut c1: Vec<T>,
    mut c2: Vec<T>,
    h_col: &[T],
    h_sub: f64,
) {
    div_in_place(&mut c1, h_sub);
    div_in_place(&mut c2, h_sub);
    fact.u1.push_column(&c1);
    fact.u2.push_column(&c2);
    fact.alpha.push(fact.q.cols());
    fact.h.push_zero_row();
    let mut col = h_col.to_vec();
    col.resize(fact.h.rows(), T::zero());
    fact.h.push_column(&col);
}

/// Runs `step` until `k_target` basis vectors exist or the recursion stops.
pub(crate) fn run_until<T: Scalar>(
    mut fact: CompactArnoldiFactorization<T>,
    k_target: usize,
    mut step: impl FnMut(&mut CompactArnoldiFactorization<T>) -> Result<StepOutcome<T>>,
) -> Result<CompactArnoldiFactorization<T>> {
    if k_target == 0 {
        return Err(Error::invalid("k_target must be at least 1"));
    }
    while fact.k() < k_target {
        let out = step(&mut fact)?;
        if out.kind == StepKind::Breakdown {
            return Ok(fact);
        }
    }
    fact.status = Status::Completed;
    Ok(fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector::unit;

    #[test]
    fn init_with_zero_previous_vector() {
        let f = init_factorization(&[0.0; 3], &[3.0, 4.0, 0.0], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.gamma(), 5.0);
        assert_eq!(f.alpha(), &[1]);
        assert_eq!(f.q().col(0), &[0.6, 0.8, 0.0]);
        assert_eq!(f.u1().as_slice(), &[1.0]);
        assert_eq!(f.u2().as_slice(), &[0.0]);
        assert_eq!(f.h().shape(), (1, 0));
    }

    #[test]
    fn init_with_orthonormal_pair() {
        let f = init_factorization::<f64>(&unit(3, 0), &unit(3, 1), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.gamma(), 2f64.sqrt());
        assert_eq!(f.alpha(), &[2]);
        let v = f.basis();
        let s = 1.0 / 2f64.sqrt();
        let want = [0.0, s, 0.0, s, 0.0, 0.0];
        for (a, b) in v.col(0).iter().zip(want) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn init_rejects_zero_start() {
        assert!(init_factorization(&[0.0; 2], &[0.0; 2], DEFAULT_RANK_TOL).is_err());
    }

    #[test]
    fn residual_of_zero_operators() {
        let ops = OperatorPair::from_dense(Matrix::zeros(3, 3), Matrix::zeros(3, 3)).unwrap();
        let f = init_factorization(&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], DEFAULT_RANK_TOL).unwrap();
        assert_eq!(next_residual(&f, &ops).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn residual_of_identity_is_the_start() {
        let ops = OperatorPair::from_dense(Matrix::identity(3), Matrix::zeros(3, 3)).unwrap();
        let f = init_factorization(&[0.0; 3], &unit(3, 0), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(next_residual(&f, &ops).unwrap(), unit(3, 0));
    }

    #[test]
    fn wrong_length_operator_is_rejected() {
        let ops = OperatorPair::new(3, |x: &[f64]| x[..2].to_vec(), |x: &[f64]| x.to_vec());
        let f = init_factorization(&[0.0; 3], &unit(3, 0), DEFAULT_RANK_TOL).unwrap();
        assert!(matches!(next_residual(&f, &ops), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn first_level_signals() {
        let f = init_factorization(&[0.0; 3], &unit(3, 0), DEFAULT_RANK_TOL).unwrap();
        let inside = first_level_orthogonalize(&f, &[2.0, 0.0, 0.0], true, 1e-14).unwrap();
        assert_eq!(inside.beta, 0.0);
        assert_eq!(inside.s, vec![2.0]);
        assert!(inside.q_new.is_none());
        let outside = first_level_orthogonalize(&f, &[0.0, 0.0, 3.0], true, 1e-14).unwrap();
        assert_eq!(outside.s, vec![0.0]);
        assert_eq!(outside.beta, 3.0);
        assert_eq!(outside.q_new.unwrap(), unit(3, 2));
    }

    #[test]
    fn names_round_trip() {
        for s in ["running", "completed", "breakdown", "deflated-to-invariance"] {
            assert_eq!(Status::parse(s).unwrap().as_str(), s);
        }
        for m in ["itoar-mgs", "itoar-proc1", "itoar-proc2", "toar"] {
            assert_eq!(Method::parse(m).unwrap().as_str(), m);
        }
    }
}
