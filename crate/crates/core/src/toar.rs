//! TOAR baseline: the coefficient vector `(s; u)` is orthogonalized against
//! the stacked columns of `[U1; U2]` in one Gram-Schmidt sweep.

use crate::error::{Error, Result};
use crate::factorization::{
    advance, init_factorization, run_until, ArnoldiOptions, CompactArnoldiFactorization, Method,
    OperatorPair, SecondLevelResult, StepOutcome,
};
use crate::linalg::mgs::mgs_project;
use crate::linalg::vector::norm2_sq;
use crate::scalar::Scalar;

pub fn toar_second_level<T: Scalar>(
    fact: &CompactArnoldiFactorization<T>,
    s: &[T],
    u: &[T],
    beta: f64,
    reorth: bool,
) -> Result<SecondLevelResult<T>> {
    let eta = fact.eta();
    if s.len() != eta || u.len() != eta {
        return Err(Error::invalid(format!(
            "second level expects vectors of length {eta}, got {} and {}",
            s.len(),
            u.len()
        )));
    }
    let w = fact.stacked_u();
    let mut z = s.to_vec();
    z.extend_from_slice(u);
    let p = mgs_project(&w, &z, usize::from(reorth))?;
    let mut x = p.residual;
    let y = x.split_off(eta);
    let h_sub = (beta * beta + norm2_sq(&x) + norm2_sq(&y)).sqrt();
    let passes = 1 + u64::from(reorth);
    Ok(SecondLevelResult {
        h: p.coeffs,
        x,
        y,
        h_sub,
        y_defect: 0.0,
        flops: passes * 8 * (eta * fact.k()) as u64,
    })
}

pub fn toar_step<T: Scalar>(
    fact: &mut CompactArnoldiFactorization<T>,
    ops: &OperatorPair<T>,
    opts: &ArnoldiOptions,
) -> Result<StepOutcome<T>> {
    advance(fact, ops, opts, |f, s, u, beta| {
        Ok((toar_second_level(f, s, u, beta, opts.reorth_second)?, None))
    })
}

pub fn toar_run<T: Scalar>(
    ops: &OperatorPair<T>,
    r_m1: &[T],
    r_0: &[T],
    k_target: usize,
    opts: &ArnoldiOptions,
) -> Result<CompactArnoldiFactorization<T>> {
    if k_target == 0 {
        return Err(Error::invalid("k_target must be at least 1"));
    }
    let fact = init_factorization(r_m1, r_0, opts.rank_tol)?.with_method(Method::Toar);
    run_until(fact, k_target, |f| toar_step(f, ops, opts))
}
