//! I-TOAR second level and drivers.
//!
//! The default update orthogonalizes `(s; u)` against the columns of
//! `[U1; U2]` block by block, dividing by the column weights
//! `‖U1(:,t)‖² + ‖U2(:,t)‖²`. When `U1` has orthogonal columns and `U2` one
//! nonzero per column this is the published `γ₁` recurrence; otherwise it
//! still yields a valid Arnoldi step, which the published form does not.
//! Entries of `y` at rounding level are zeroed so that the `U2` structure is
//! exact whenever it holds numerically.
//!
//! `ArnoldiOptions::literal_structure` switches to the published recurrence
//! as written, kept for comparison.

use crate::error::{Error, Result};
use crate::factorization::{
    advance, init_factorization, run_until, ArnoldiOptions, CompactArnoldiFactorization, Fallback,
    Method, OperatorPair, SecondLevelResult, StepOutcome, Variant,
};
use crate::linalg::vector::{axpy, dot, norm2, norm2_sq, sub};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, UNIT_ROUNDOFF};

pub use crate::factorization::SecondLevelResult as ItoarSecondLevel;

/// Scale of the proc1/proc2 degeneracy floor, relative to `‖U‖_F`.
pub const DEGENERACY_FLOOR: f64 = 1e3 * UNIT_ROUNDOFF;

/// Relative disagreement tolerated between the procedure coefficients and
/// `U1ᴴs + U2ᴴu` before falling back to Gram-Schmidt.
pub const PROCEDURE_CHECK_TOL: f64 = 1.5e-8;

fn check_shapes<T: Scalar>(fact: &CompactArnoldiFactorization<T>, s: &[T], u: &[T]) -> Result<()> {
    let eta = fact.eta();
    if s.len() != eta || u.len() != eta {
        return Err(Error::invalid(format!(
            "second level expects vectors of length {eta}, got {} and {}",
            s.len(),
            u.len()
        )));
    }
    Ok(())
}

/// Zeroes entries `0..len-1` of `y` with magnitude at most `tol`, or all of
/// them when `tol` is infinite; returns the norm of what was removed.
fn zero_structurally<T: Scalar>(y: &mut [T], tol: f64) -> f64 {
    let mut removed = 0.0;
    let last = y.len().saturating_sub(1);
    for v in &mut y[..last] {
        if v.abs() <= tol {
            removed += v.abs2();
            *v = T::zero();
        }
    }
    removed.sqrt()
}

fn finish<T: Scalar>(
    h: Vec<T>,
    x: Vec<T>,
    y: Vec<T>,
    beta: f64,
    y_defect: f64,
    flops: u64,
) -> SecondLevelResult<T> {
    let h_sub = (beta * beta + norm2_sq(&x) + norm2_sq(&y)).sqrt();
    SecondLevelResult {
        h,
        x,
        y,
        h_sub,
        y_defect,
        flops,
    }
}

/// Gram-Schmidt second level (the default variant).
pub fn second_level_mgs<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    opts: &ArnoldiOptions,
) -> Result<SecondLevelResult<T>> {
    check_shapes(fact, s, u)?;
    if opts.literal_structure {
        return literal_mgs(fact, s, u, beta, opts);
    }
    let (u1, u2) = (fact.u1(), fact.u2());
    let (eta, j) = (u1.rows() as u64, u1.cols());
    let passes = 1 + usize::from(opts.reorth_second);
    let weights: Vec<f64> = (0..j)
        .map(|t| norm2_sq(u1.col(t)) + norm2_sq(u2.col(t)))
        .collect();
    if let Some(t) = weights.iter().position(|&w| !(w > UNIT_ROUNDOFF)) {
        return Err(Error::DegenerateColumn { column: t });
    }
    let mut x = s.to_vec();
    let mut y = u.to_vec();
    let mut h = vec![T::zero(); j];
    for _ in 0..passes {
        for t in 0..j {
            let g = (dot(u1.col(t), &x) + dot(u2.col(t), &y)).quot(T::from_real(weights[t]));
            axpy(-g, u1.col(t), &mut x);
            axpy(-g, u2.col(t), &mut y);
            h[t] += g;
        }
    }
    let defect = zero_structurally(&mut y, opts.zero_tol * norm2(u));
    let flops = 4 * eta * j as u64 + passes as u64 * 8 * eta * j as u64;
    Ok(finish(h, x, y, beta, defect, flops))
}

fn literal_mgs<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    opts: &ArnoldiOptions,
) -> Result<SecondLevelResult<T>> {
    let (u1, u2) = (fact.u1(), fact.u2());
    let (eta, j) = (u1.rows() as u64, u1.cols());
    let passes = 1 + usize::from(opts.reorth_second);
    let norms: Vec<f64> = u1.column_iter().map(norm2_sq).collect();
    if let Some(t) = norms.iter().position(|&w| !(w > UNIT_ROUNDOFF)) {
        return Err(Error::DegenerateColumn { column: t });
    }
    let mut x = s.to_vec();
    for _ in 0..passes {
        for t in 0..j {
            let g = dot(u1.col(t), &x).quot(T::from_real(norms[t]));
            axpy(-g, u1.col(t), &mut x);
        }
    }
    let h: Vec<T> = u1
        .adjoint_matvec(s)
        .into_iter()
        .zip(u2.adjoint_matvec(u))
        .map(|(a, b)| a + b)
        .collect();
    let mut y = sub(u, &u2.matvec(&h));
    let defect = zero_structurally(&mut y, f64::INFINITY);
    let flops = 2 * eta * j as u64 + passes as u64 * 4 * eta * j as u64 + 4 * eta * j as u64;
    Ok(finish(h, x, y, beta, defect, flops))
}

/// proc1: `h_t = U2(:,t)ᴴu / ‖U2(:,t)‖²`.
pub fn second_level_procedure1<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    opts: &ArnoldiOptions,
) -> Result<SecondLevelResult<T>> {
    procedure(fact, s, u, beta, opts, fact.u2(), u)
}

/// proc2: `h_t = U1(:,t)ᴴs / ‖U1(:,t)‖²`.
pub fn second_level_procedure2<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    opts: &ArnoldiOptions,
) -> Result<SecondLevelResult<T>> {
    procedure(fact, s, u, beta, opts, fact.u1(), s)
}

fn procedure<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    opts: &ArnoldiOptions,
    block: &Matrix<T>,
    rhs: &[T],
) -> Result<SecondLevelResult<T>> {
    check_shapes(fact, s, u)?;
    let (u1, u2) = (fact.u1(), fact.u2());
    let (eta, j) = (u1.rows(), u1.cols());
    let floor = DEGENERACY_FLOOR * block.frobenius_norm();
    let mut h = Vec::with_capacity(j);
    for (t, c) in block.column_iter().enumerate() {
        let nc = norm2(c);
        if !(nc >= floor) || nc == 0.0 {
            return Err(Error::SmallDiagonal {
                index: t,
                value: nc,
                floor,
            });
        }
        h.push(dot(c, rhs).quot(T::from_real(nc * nc)));
    }
    let x = sub(s, &u1.matvec(&h));
    let u2h_last = (0..j).map(|t| u2[(eta - 1, t)] * h[t]).sum::<T>();
    let mut y = vec![T::zero(); eta];
    y[eta - 1] = u[eta - 1] - u2h_last;

    if opts.verify_procedures {
        let h_ref: Vec<T> = u1
            .adjoint_matvec(s)
            .into_iter()
            .zip(u2.adjoint_matvec(u))
            .map(|(a, b)| a + b)
            .collect();
        let scale = norm2(s).max(norm2(u)).max(f64::MIN_POSITIVE);
        let dh = norm2(&sub(&h, &h_ref)) / scale;
        let full_y = sub(u, &u2.matvec(&h));
        let dy = norm2(&full_y[..eta - 1]) / scale;
        let defect = dh.max(dy);
        if !(defect <= PROCEDURE_CHECK_TOL) {
            return Err(Error::StructureViolated { defect });
        }
    }
    let (eta, j) = (eta as u64, j as u64);
    let flops = 3 * eta * j + 2 * eta * j + 2 * j + 4 * eta;
    Ok(finish(h, x, y, beta, 0.0, flops))
}

/// Second level for the configured variant; a failed procedure falls back to
/// Gram-Schmidt and reports why.
pub fn second_level<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    opts: &ArnoldiOptions,
) -> Result<(SecondLevelResult<T>, Option<Fallback>)> {
    let attempt = match opts.variant {
        Variant::Mgs => return Ok((second_level_mgs(fact, s, u, beta, opts)?, None)),
        Variant::Proc1 => second_level_procedure1(fact, s, u, beta, opts),
        Variant::Proc2 => second_level_procedure2(fact, s, u, beta, opts),
    };
    let fallback = match attempt {
        Ok(r) => return Ok((r, None)),
        Err(Error::SmallDiagonal {
            index,
            value,
            floor,
        }) => {
            log::warn!(
                "step {}: {:?} SmallDiagonal, column {index} has norm {value:.3e} below {floor:.3e}; falling back to Gram-Schmidt",
                fact.k(),
                opts.variant
            );
            Fallback::SmallDiagonal { index }
        }
        Err(Error::StructureViolated { defect }) => {
            log::warn!(
                "step {}: {:?} StructureViolated, coefficients off by {defect:.3e}; falling back to Gram-Schmidt",
                fact.k(),
                opts.variant
            );
            Fallback::StructureViolated { defect }
        }
        Err(e) => return Err(e),
    };
    Ok((second_level_mgs(fact, s, u, beta, opts)?, Some(fallback)))
}

/// One I-TOAR step.
pub fn itoar_step<T: Scalar>(
    fact: &mut CompactArnoldiFactorization<T>,
    ops: &OperatorPair<T>,
    opts: &ArnoldiOptions,
) -> Result<StepOutcome<T>> {
    advance(fact, ops, opts, |f, s, u, beta| second_level(f, s, u, beta, opts))
}

/// Builds `k_target` basis vectors, or fewer if the recursion breaks down.
pub fn itoar_run<T: Scalar>(
    ops: &OperatorPair<T>,
    r_m1: &[T],
    r_0: &[T],
    k_target: usize,
    opts: &ArnoldiOptions,
) -> Result<CompactArnoldiFactorization<T>> {
    if k_target == 0 {
        return Err(Error::invalid("k_target must be at least 1"));
    }
    let fact = init_factorization(r_m1, r_0, opts.rank_tol)?.with_method(Method::Itoar(opts.variant));
    run_until(fact, k_target, |f| itoar_step(f, ops, opts))
}
