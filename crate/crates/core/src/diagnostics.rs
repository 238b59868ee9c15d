//! Reference constructions and measured error quantities.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::factorization::{CompactArnoldiFactorization, OperatorPair, StepKind};
use crate::linalg::mgs::mgs_project;
use crate::linalg::svd::{norm_2, pinv, svd_metrics};
use crate::linalg::vector::{div_in_place, norm2, norm2_sq};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

/// Columns `r_{-1}, r_0, …, r_{k-1}` of the recurrence, evaluated verbatim.
pub fn brute_force_sequence<T: Scalar>(
    ops: &OperatorPair<T>,
    r_m1: &[T],
    r_0: &[T],
    k: usize,
) -> Result<Matrix<T>> {
    let n = ops.n();
    if r_m1.len() != n || r_0.len() != n {
        return Err(Error::invalid("start vectors do not match the operator size"));
    }
    let mut out = Matrix::from_columns(n, &[r_m1.to_vec(), r_0.to_vec()]);
    for j in 2..=k {
        let a = ops.apply_a(out.col(j - 1))?;
        let b = ops.apply_b(out.col(j - 2))?;
        let r: Vec<T> = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        out.push_column(&r);
    }
    Ok(out.columns(0..k + 1))
}

/// Plain Arnoldi on `L = [[A, B], [I, 0]]`.
#[derive(Debug, Clone)]
pub struct LinearizedArnoldi<T> {
    /// `2n × (m+1)`.
    pub v: Matrix<T>,
    /// `(m+1) × m`.
    pub h: Matrix<T>,
    pub breakdown: bool,
}

/// `k` Arnoldi steps with full reorthogonalization from
/// `v0 = (r_0; r_m1)/‖·‖`. Stops early, with `breakdown` set, when the new
/// direction vanishes.
pub fn linearized_arnoldi<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    r_m1: &[T],
    r_0: &[T],
    k: usize,
) -> Result<LinearizedArnoldi<T>> {
    let n = a.rows();
    if a.shape() != (n, n) || b.shape() != (n, n) || r_m1.len() != n || r_0.len() != n {
        return Err(Error::invalid("inconsistent dimensions for the linearization"));
    }
    let mut v0 = r_0.to_vec();
    v0.extend_from_slice(r_m1);
    let g = norm2(&v0);
    if g == 0.0 {
        return Err(Error::invalid("starting vector is zero"));
    }
    div_in_place(&mut v0, g);
    let mut v = Matrix::column_vector(&v0);
    let mut h = Matrix::zeros(1, 0);
    for j in 0..k {
        let w = apply_linearization(a, b, v.col(j));
        let p = mgs_project(&v, &w, 1)?;
        let floor = 100.0 * UNIT_ROUNDOFF * norm2(&w);
        let mut col = p.coeffs;
        col.push(T::from_real(p.beta));
        if !(p.beta > floor) {
            return Ok(LinearizedArnoldi {
                v,
                h,
                breakdown: true,
            });
        }
        let mut next = p.residual;
        div_in_place(&mut next, p.beta);
        v.push_column(&next);
        h.push_zero_row();
        h.push_column(&col);
    }
    Ok(LinearizedArnoldi {
        v,
        h,
        breakdown: false,
    })
}

/// `L·(top; bottom) = (A·top + B·bottom; top)`.
pub fn apply_linearization<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, v: &[T]) -> Vec<T> {
    let n = a.rows();
    let (top, bot) = v.split_at(n);
    let mut out: Vec<T> = a
        .matvec(top)
        .into_iter()
        .zip(b.matvec(bot))
        .map(|(x, y)| x + y)
        .collect();
    out.extend_from_slice(top);
    out
}

/// `‖L·V(:,0..k-1) − V·H‖_F / ((‖[A B]‖_F + 1)·‖H‖_F)`; zero when `k ≤ 1`.
pub fn residual_check<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> f64 {
    let k = fact.k();
    if k <= 1 {
        return 0.0;
    }
    let v = fact.basis();
    let mut lv = Matrix::zeros(v.rows(), 0);
    for j in 0..k - 1 {
        lv.push_column(&apply_linearization(a, b, v.col(j)));
    }
    let r = lv.sub(&v.matmul(fact.h()));
    let hn = fact.h().frobenius_norm();
    if hn == 0.0 {
        return r.frobenius_norm();
    }
    r.frobenius_norm() / ((ab_norm(a, b) + 1.0) * hn)
}

fn ab_norm<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> f64 {
    (a.frobenius_norm().powi(2) + b.frobenius_norm().powi(2)).sqrt()
}

/// Orthogonality and structure measurements.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StructureReport {
    /// `‖I − QᴴQ‖_F`.
    pub q_orth_loss: f64,
    /// `‖I − VᴴV‖_F`.
    pub v_orth_loss: f64,
    /// `‖I − [U1;U2]ᴴ[U1;U2]‖_F`.
    pub stacked_u_orth_loss: f64,
    /// Largest off-diagonal magnitude of `U1ᴴU1`.
    pub u1_gram_offdiag: f64,
    /// `u1_gram_offdiag / ‖U1‖_F²`.
    pub u1_gram_offdiag_rel: f64,
    /// Largest `|U2(i,t)|` outside the row where column `t` may be nonzero.
    pub u2_offdiag_max: f64,
    /// Largest entry below the triangular/Hessenberg profile of `U1`, `U2`.
    pub u_profile_violation: f64,
    /// Largest entry below the subdiagonal of `H`, or negative subdiagonal.
    pub hessenberg_violation: f64,
    /// Largest `‖U1ᴴx_j + U2ᴴy_j‖ / (‖x_j‖ + ‖y_j‖)` over the steps.
    pub step_orth_max: f64,
    /// Largest relative gap between `sqrt(β² + ‖x‖² + ‖y‖²)` and `h_{j+1,j}`.
    pub h_sub_consistency: f64,
    /// Largest norm discarded by structural zeroing of `y`.
    pub y_defect_max: f64,
    /// Steps whose requested procedure fell back to Gram-Schmidt.
    pub fallbacks: usize,
    pub deflations: usize,
}

fn diag_row(alpha: &[usize], t: usize) -> usize {
    if t == 0 {
        0
    } else {
        alpha[t - 1] - 1
    }
}

pub fn structure_report<T: Scalar>(fact: &CompactArnoldiFactorization<T>) -> StructureReport {
    let (u1, u2, h) = (fact.u1(), fact.u2(), fact.h());
    let alpha = fact.alpha();
    let k = fact.k();
    let gram = u1.adjoint_matmul(u1);
    let mut u1_gram_offdiag = 0.0f64;
    for j in 0..k {
        for i in 0..k {
            if i != j {
                u1_gram_offdiag = u1_gram_offdiag.max(gram[(i, j)].abs());
            }
        }
    }
    let u1n = u1.frobenius_norm().powi(2);
    let mut u2_offdiag_max = 0.0f64;
    let mut u_profile_violation = 0.0f64;
    for t in 0..k {
        let d = diag_row(alpha, t);
        for i in 0..u2.rows() {
            if i != d {
                u2_offdiag_max = u2_offdiag_max.max(u2[(i, t)].abs());
            }
            if i > d {
                u_profile_violation = u_profile_violation.max(u2[(i, t)].abs());
            }
            if i >= alpha[t] {
                u_profile_violation = u_profile_violation.max(u1[(i, t)].abs());
            }
        }
    }
    let mut hessenberg_violation = 0.0f64;
    for j in 0..h.cols() {
        for i in j + 2..h.rows() {
            hessenberg_violation = hessenberg_violation.max(h[(i, j)].abs());
        }
        let sub = h[(j + 1, j)];
        hessenberg_violation = hessenberg_violation.max((-sub.re()).max(0.0)).max(sub.im().abs());
    }

    let mut step_orth_max = 0.0f64;
    let mut h_sub_consistency = 0.0f64;
    let mut y_defect_max = 0.0f64;
    let mut fallbacks = 0;
    match fact.step_log() {
        Some(log) => {
            for (t, rec) in log.iter().enumerate().filter(|(_, r)| r.kind != StepKind::Breakdown) {
                let eta = rec.x.len();
                let b1 = u1.block(0..eta, 0..t + 1);
                let b2 = u2.block(0..eta, 0..t + 1);
                step_orth_max = step_orth_max.max(step_orthogonality(&b1, &b2, &rec.x, &rec.y));
                let beta = if rec.kind == StepKind::Expanded { rec.beta } else { 0.0 };
                let again = (beta * beta + norm2_sq(&rec.x) + norm2_sq(&rec.y)).sqrt();
                let stored = h[(t + 1, t)].abs();
                h_sub_consistency = h_sub_consistency.max((again - stored).abs() / stored);
                y_defect_max = y_defect_max.max(rec.y_defect);
                fallbacks += usize::from(rec.fallback.is_some());
            }
        }
        None => {
            // x_j, y_j are the leading parts of the next column times h_{j+1,j}.
            for t in 0..k.saturating_sub(1) {
                let eta = alpha[t];
                let hs = h[(t + 1, t)].abs();
                let x: Vec<T> = u1.col(t + 1)[..eta].iter().map(|v| v.scale(hs)).collect();
                let y: Vec<T> = u2.col(t + 1)[..eta].iter().map(|v| v.scale(hs)).collect();
                let b1 = u1.block(0..eta, 0..t + 1);
                let b2 = u2.block(0..eta, 0..t + 1);
                step_orth_max = step_orth_max.max(step_orthogonality(&b1, &b2, &x, &y));
                let w = (norm2_sq(u1.col(t + 1)) + norm2_sq(u2.col(t + 1))).sqrt();
                h_sub_consistency = h_sub_consistency.max((w - 1.0).abs());
            }
        }
    }

    StructureReport {
        q_orth_loss: fact.q().orthonormality_loss(),
        v_orth_loss: fact.basis().orthonormality_loss(),
        stacked_u_orth_loss: fact.stacked_u().orthonormality_loss(),
        u1_gram_offdiag,
        u1_gram_offdiag_rel: if u1n > 0.0 { u1_gram_offdiag / u1n } else { 0.0 },
        u2_offdiag_max,
        u_profile_violation,
        hessenberg_violation,
        step_orth_max,
        h_sub_consistency,
        y_defect_max,
        fallbacks,
        deflations: fact.deflations(),
    }
}

fn step_orthogonality<T: Scalar>(u1: &Matrix<T>, u2: &Matrix<T>, x: &[T], y: &[T]) -> f64 {
    let denom = norm2(x) + norm2(y);
    if denom == 0.0 {
        return 0.0;
    }
    let v: Vec<T> = u1
        .adjoint_matvec(x)
        .into_iter()
        .zip(u2.adjoint_matvec(y))
        .map(|(a, b)| a + b)
        .collect();
    norm2(&v) / denom
}

/// Measured backward error of a run and the bound it is compared with.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardError {
    pub fmv_norm: f64,
    pub f1_norm: f64,
    pub f2_norm: f64,
    /// `‖[ΔA ΔB]‖_F / ‖[A B]‖_F`.
    pub delta_ab_ratio: f64,
    /// `‖(A+ΔA)·X1 + (B+ΔB)·X2 − Q·U1·H‖_F / ‖[A B]‖_F`, with
    /// `X_i = Q·U_i(:,0..k-1)`; small when the perturbation is exact.
    pub perturbed_relation: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub cond_q: f64,
    pub cond_u: f64,
    pub phi2: f64,
    pub theorem_bound: f64,
    pub bound_satisfied: bool,
    /// `φ₂·K⁴·ε < 1`.
    pub hypothesis_ok: bool,
    /// `X1` or `X2` lost rank, so the pseudo-inverses are truncated.
    pub pinv_truncated: bool,
}

/// Computes `F_mv`, `F`, `ΔA`, `ΔB` and the bound from a logged run.
///
/// `alpha_split` distributes the correction between `A` and `B`
/// (`ΔA = −α·(F_mv + F1)·X1†`, `ΔB = −(1−α)·(F_mv + F1)·X2†`). When a
/// pseudo-inverse is truncated the perturbation is still reported, while
/// `zeta1`, `phi2` and `theorem_bound` are infinite.
pub fn backward_error<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
    alpha_split: f64,
) -> Result<BackwardError> {
    let log = fact.step_log().ok_or(Error::MissingStepLog)?;
    let k = fact.k();
    if k < 2 {
        return Err(Error::invalid("backward error needs at least one step"));
    }
    let n = fact.n();
    let q = fact.q();
    let km = k - 1;
    let qu1 = q.matmul(fact.u1());
    let qu2 = q.matmul(fact.u2());
    let x1 = qu1.columns(0..km);
    let x2 = qu2.columns(0..km);
    let r_hat = Matrix::from_columns(n, &log.iter().take(km).map(|r| r.r.clone()).collect::<Vec<_>>());
    let h = fact.h();

    let fmv = a.matmul(&x1).add(&b.matmul(&x2)).sub(&r_hat);
    let f1 = r_hat.sub(&qu1.matmul(h));
    let f2 = x1.sub(&qu2.matmul(h));

    let p1 = pinv(&x1);
    let p2 = pinv(&x2);
    let truncated = p1.truncated || p2.truncated;
    let total = fmv.add(&f1);
    let da = total.matmul(&p1.matrix).scaled(T::from_real(-alpha_split));
    let db = total.matmul(&p2.matrix).scaled(T::from_real(-(1.0 - alpha_split)));
    let abn = ab_norm(a, b);
    let delta_ab_ratio = ab_norm(&da, &db) / abn;
    let perturbed_relation = a
        .add(&da)
        .matmul(&x1)
        .add(&b.add(&db).matmul(&x2))
        .sub(&qu1.matmul(h))
        .frobenius_norm()
        / abn;

    let v_prev = x1.vstack(&x2);
    let zeta1 = if truncated {
        f64::INFINITY
    } else {
        norm_2(&p1.matrix.vstack(&p2.matrix)) * svd_metrics(&v_prev).sigma_min
    };
    let stacked = fact.stacked_u();
    let su = svd_metrics(&stacked);
    let zeta2 = svd_metrics(fact.u1()).sigma_min / su.sigma_min;
    let cond_q = svd_metrics(q).cond2;
    let cond_u = su.cond2;
    let kk = cond_q.max(cond_u);
    let kf = k as f64;
    let phi2 = (kf + 1.0) * (2.0 * kf + 1.0) * zeta1 / zeta2;
    let eps = UNIT_ROUNDOFF;
    let theorem_bound = (2.0 * zeta1 * n as f64 * kf * kf + 0.5 * phi2 * kk * kk) * kk * kk * eps;
    let hypothesis_ok = (phi2 * kk.powi(4) * eps) < 1.0;
    Ok(BackwardError {
        fmv_norm: fmv.frobenius_norm(),
        f1_norm: f1.frobenius_norm(),
        f2_norm: f2.frobenius_norm(),
        delta_ab_ratio,
        perturbed_relation,
        zeta1,
        zeta2,
        cond_q,
        cond_u,
        phi2,
        theorem_bound,
        bound_satisfied: delta_ab_ratio <= theorem_bound,
        hypothesis_ok,
        pinv_truncated: truncated,
    })
}

/// Everything measured on one factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub method: String,
    pub status: String,
    pub n: usize,
    pub k: usize,
    pub eta: usize,
    pub structure: StructureReport,
    pub arnoldi_residual: Option<f64>,
    pub backward: Option<BackwardError>,
}

/// Structure report plus, when dense operators are given, the Arnoldi
/// residual and the backward error (the latter needs the step log).
pub fn diagnose<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    dense: Option<(&Matrix<T>, &Matrix<T>)>,
    alpha_split: f64,
) -> Result<DiagnosticsReport> {
    let structure = structure_report(fact);
    let (arnoldi_residual, backward) = match dense {
        Some((a, b)) => {
            let res = residual_check(fact, a, b);
            let be = if fact.k() >= 2 && fact.step_log().is_some() {
                Some(backward_error(fact, a, b, alpha_split)?)
            } else {
                None
            };
            (Some(res), be)
        }
        None => (None, None),
    };
    Ok(DiagnosticsReport {
        method: fact.method().to_string(),
        status: fact.status().to_string(),
        n: fact.n(),
        k: fact.k(),
        eta: fact.eta(),
        structure,
        arnoldi_residual,
        backward,
    })
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

impl StructureReport {
    fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("q_orth_loss", sci(self.q_orth_loss)),
            ("v_orth_loss", sci(self.v_orth_loss)),
            ("stacked_u_orth_loss", sci(self.stacked_u_orth_loss)),
            ("u1_gram_offdiag", sci(self.u1_gram_offdiag)),
            ("u1_gram_offdiag_rel", sci(self.u1_gram_offdiag_rel)),
            ("u2_offdiag_max", sci(self.u2_offdiag_max)),
            ("u_profile_violation", sci(self.u_profile_violation)),
            ("hessenberg_violation", sci(self.hessenberg_violation)),
            ("step_orth_max", sci(self.step_orth_max)),
            ("h_sub_consistency", sci(self.h_sub_consistency)),
            ("y_defect_max", sci(self.y_defect_max)),
            ("fallbacks", self.fallbacks.to_string()),
            ("deflations", self.deflations.to_string()),
        ]
    }

    /// `name = value` lines.
    pub fn to_kv(&self) -> String {
        render(&self.entries())
    }
}

impl BackwardError {
    fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("fmv_norm", sci(self.fmv_norm)),
            ("f1_norm", sci(self.f1_norm)),
            ("f2_norm", sci(self.f2_norm)),
            ("delta_ab_ratio", sci(self.delta_ab_ratio)),
            ("perturbed_relation", sci(self.perturbed_relation)),
            ("zeta1", sci(self.zeta1)),
            ("zeta2", sci(self.zeta2)),
            ("cond_Q", sci(self.cond_q)),
            ("cond_U", sci(self.cond_u)),
            ("phi2", sci(self.phi2)),
            ("theorem_bound", sci(self.theorem_bound)),
            ("bound_satisfied", self.bound_satisfied.to_string()),
            ("hypothesis_ok", self.hypothesis_ok.to_string()),
            ("pinv_truncated", self.pinv_truncated.to_string()),
        ]
    }
}

impl DiagnosticsReport {
    /// `name = value` lines, floats with 17 significant digits.
    pub fn to_kv(&self) -> String {
        let mut e: Vec<(&'static str, String)> = vec![
            ("method", self.method.clone()),
            ("status", self.status.clone()),
            ("n", self.n.to_string()),
            ("k", self.k.to_string()),
            ("eta", self.eta.to_string()),
        ];
        if let Some(r) = self.arnoldi_residual {
            e.push(("arnoldi_residual", sci(r)));
        }
        e.extend(self.structure.entries());
        if let Some(b) = &self.backward {
            e.extend(b.entries());
        }
        render(&e)
    }
}

fn render(entries: &[(&'static str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
