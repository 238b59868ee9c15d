//! Galerkin reduction of SISO second-order systems
//! `s²·M·x + s·D·x + K·x = f·u`, `y = c·x`, around an expansion point `s0`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factorization::OperatorPair;
use crate::linalg::lu::LuFactors;
use crate::linalg::Matrix;
use crate::scalar::{Complex64, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSystem {
    pub m: Matrix<f64>,
    pub d: Matrix<f64>,
    pub k: Matrix<f64>,
    pub f: Vec<f64>,
    pub c: Vec<f64>,
}

impl SecondOrderSystem {
    pub fn new(m: Matrix<f64>, d: Matrix<f64>, k: Matrix<f64>, f: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let n = m.rows();
        for (name, x) in [("M", &m), ("D", &d), ("K", &k)] {
            if x.shape() != (n, n) {
                return Err(Error::invalid(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    x.rows(),
                    x.cols()
                )));
            }
            if !x.is_finite() {
                return Err(Error::invalid(format!("{name} has non-finite entries")));
            }
        }
        if f.len() != n || c.len() != n {
            return Err(Error::invalid(format!(
                "f and c must have length {n}, got {} and {}",
                f.len(),
                c.len()
            )));
        }
        Ok(SecondOrderSystem { m, d, k, f, c })
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }
}

/// Projected operators `Qᴴ·X·Q`, `Qᴴ·f` and `c·Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedModel<T> {
    pub mk: Matrix<T>,
    pub dk: Matrix<T>,
    pub kk: Matrix<T>,
    pub fk: Vec<T>,
    pub ck: Vec<T>,
    /// Free-form label of the basis used.
    pub basis_ref: String,
}

impl<T: Scalar> ReducedModel<T> {
    pub fn dim(&self) -> usize {
        self.mk.rows()
    }
}

/// Recurrence operators of the shifted problem, with the factorization of
/// `K̃` they share.
#[derive(Debug, Clone)]
pub struct ShiftedProblem<T> {
    pub ops: OperatorPair<T>,
    pub r_m1: Vec<T>,
    pub r_0: Vec<T>,
    pub k_shift: Arc<LuFactors<T>>,
    pub d_shift: Matrix<T>,
    pub m: Matrix<T>,
}

impl<T: Scalar> ShiftedProblem<T> {
    /// Explicit `A = −K̃⁻¹D̃` and `B = −K̃⁻¹M` (n solves each).
    pub fn dense(&self) -> Result<(Matrix<T>, Matrix<T>)> {
        let a = self.k_shift.solve_matrix(&self.d_shift)?.scaled(-T::one());
        let b = self.k_shift.solve_matrix(&self.m)?.scaled(-T::one());
        Ok((a, b))
    }
}

/// `D̃ = 2·s0·M + D`, `K̃ = s0²·M + s0·D + K`; the recurrence is
/// `A = −K̃⁻¹D̃`, `B = −K̃⁻¹M`, `r_{-1} = 0`, `r_0 = K̃⁻¹f`.
pub fn shifted_operators<T: Scalar>(sys: &SecondOrderSystem, s0: T) -> Result<ShiftedProblem<T>> {
    let m = sys.m.to_scalar::<T>();
    let d = sys.d.to_scalar::<T>();
    let k = sys.k.to_scalar::<T>();
    let two = T::from_real(2.0);
    let d_shift = m.scaled(two * s0).add(&d);
    let k_shift = m.scaled(s0 * s0).add(&d.scaled(s0)).add(&k);
    let lu = match LuFactors::factor(&k_shift) {
        Ok(lu) => Arc::new(lu),
        Err(Error::SingularMatrix { .. }) => return Err(Error::ShiftSingular),
        Err(e) => return Err(e),
    };
    let f: Vec<T> = sys.f.iter().map(|&v| T::from_real(v)).collect();
    let r_0 = lu.solve(&f)?;
    let n = sys.n();
    let (lu_a, da) = (Arc::clone(&lu), d_shift.clone());
    let (lu_b, mb) = (Arc::clone(&lu), m.clone());
    let ops = OperatorPair::new(
        n,
        move |x| negate(lu_a.solve(&da.matvec(x)).expect("length checked by OperatorPair")),
        move |x| negate(lu_b.solve(&mb.matvec(x)).expect("length checked by OperatorPair")),
    );
    Ok(ShiftedProblem {
        ops,
        r_m1: vec![T::zero(); n],
        r_0,
        k_shift: lu,
        d_shift,
        m,
    })
}

fn negate<T: Scalar>(mut v: Vec<T>) -> Vec<T> {
    for x in &mut v {
        *x = -*x;
    }
    v
}

/// Galerkin projection onto `span(Q)`.
pub fn reduce<T: Scalar>(sys: &SecondOrderSystem, q: &Matrix<T>) -> Result<ReducedModel<T>> {
    if q.rows() != sys.n() {
        return Err(Error::invalid(format!(
            "basis has {} rows, system has dimension {}",
            q.rows(),
            sys.n()
        )));
    }
    let project = |x: &Matrix<f64>| q.adjoint_matmul(&x.to_scalar::<T>().matmul(q));
    let f: Vec<T> = sys.f.iter().map(|&v| T::from_real(v)).collect();
    let ck = q
        .column_iter()
        .map(|col| col.iter().zip(&sys.c).map(|(&qv, &cv)| qv.scale(cv)).sum())
        .collect();
    Ok(ReducedModel {
        mk: project(&sys.m),
        dk: project(&sys.d),
        kk: project(&sys.k),
        fk: q.adjoint_matvec(&f),
        ck,
        basis_ref: format!("Q[{}x{}]", q.rows(), q.cols()),
    })
}

fn to_complex<T: Scalar>(x: T) -> Complex64 {
    Complex64::new(x.re(), x.im())
}

fn transfer<T: Scalar>(
    m: &Matrix<T>,
    d: &Matrix<T>,
    k: &Matrix<T>,
    f: &[T],
    c: &[T],
    s: Complex64,
) -> Result<Complex64> {
    let n = m.rows();
    let pencil = Matrix::from_fn(n, n, |i, j| {
        s * s * to_complex(m[(i, j)]) + s * to_complex(d[(i, j)]) + to_complex(k[(i, j)])
    });
    let rhs: Vec<Complex64> = f.iter().map(|&v| to_complex(v)).collect();
    let x = match LuFactors::factor(&pencil) {
        Ok(lu) => lu.solve(&rhs)?,
        Err(Error::SingularMatrix { .. }) => return Err(Error::PoleHit { re: s.re, im: s.im }),
        Err(e) => return Err(e),
    };
    Ok(c.iter().zip(&x).map(|(&ci, &xi)| to_complex(ci) * xi).sum())
}

/// `h(s) = c·(s²M + sD + K)⁻¹·f`.
pub fn transfer_full(sys: &SecondOrderSystem, s: Complex64) -> Result<Complex64> {
    transfer(&sys.m, &sys.d, &sys.k, &sys.f, &sys.c, s)
}

/// `h_k(s) = c_k·(s²M_k + sD_k + K_k)⁻¹·f_k`.
pub fn transfer_reduced<T: Scalar>(model: &ReducedModel<T>, s: Complex64) -> Result<Complex64> {
    transfer(&model.mk, &model.dk, &model.kk, &model.fk, &model.ck, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FreqScale {
    /// `s = 2πi·f`.
    #[default]
    Hertz,
    /// `s = i·ω`.
    Angular,
}

impl FreqScale {
    pub fn point(self, freq: f64) -> Complex64 {
        match self {
            FreqScale::Hertz => Complex64::new(0.0, 2.0 * std::f64::consts::PI * freq),
            FreqScale::Angular => Complex64::new(0.0, freq),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hertz" => Some(FreqScale::Hertz),
            "angular" => Some(FreqScale::Angular),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub freq: f64,
    /// `|h|`, NaN when the full pencil is singular.
    pub h_abs: f64,
    /// `|h_k|`, NaN when the reduced pencil is singular.
    pub hk_abs: f64,
    /// `|h − h_k| / |h|`, NaN when undefined.
    pub rel_err: f64,
    pub pole: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Median of the defined relative errors.
    pub fn median_rel_err(&self) -> f64 {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.rel_err).filter(|x| !x.is_nan()).collect();
        if v.is_empty() {
            return f64::NAN;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        if v.len() % 2 == 1 {
            v[m]
        } else {
            0.5 * (v[m - 1] + v[m])
        }
    }
}

fn check_freqs(freqs: &[f64]) -> Result<()> {
    match freqs.iter().find(|f| !(f.is_finite() && **f >= 0.0)) {
        Some(bad) => Err(Error::invalid(format!("sweep frequency {bad} is not finite and nonnegative"))),
        None => Ok(()),
    }
}

fn value_or_nan(r: Result<Complex64>) -> Result<Option<Complex64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::PoleHit { re, im }) => {
            log::warn!("pencil singular at s = {re} + {im}i; row flagged");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Full response at each point, evaluated in parallel.
pub fn full_response(sys: &SecondOrderSystem, freqs: &[f64], scale: FreqScale) -> Result<Vec<Option<Complex64>>> {
    check_freqs(freqs)?;
    freqs
        .par_iter()
        .map(|&f| value_or_nan(transfer_full(sys, scale.point(f))))
        .collect()
}

/// Sweep for several reduced models sharing one evaluation of the full one.
pub fn sweep_models<T: Scalar>(
    sys: &SecondOrderSystem,
    models: &[&ReducedModel<T>],
    freqs: &[f64],
    scale: FreqScale,
) -> Result<Vec<SweepTable>> {
    let full = full_response(sys, freqs, scale)?;
    models
        .iter()
        .map(|model| {
            let rows = freqs
                .par_iter()
                .zip(&full)
                .map(|(&freq, h)| {
                    let hk = value_or_nan(transfer_reduced(model, scale.point(freq)))?;
                    Ok(row(freq, *h, hk))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepTable { rows })
        })
        .collect()
}

fn row(freq: f64, h: Option<Complex64>, hk: Option<Complex64>) -> SweepRow {
    let h_abs = h.map_or(f64::NAN, |v| v.norm());
    let hk_abs = hk.map_or(f64::NAN, |v| v.norm());
    let rel_err = match (h, hk) {
        (Some(a), Some(b)) if a.norm() > 0.0 => (a - b).norm() / a.norm(),
        _ => f64::NAN,
    };
    SweepRow {
        freq,
        h_abs,
        hk_abs,
        rel_err,
        pole: h.is_none() || hk.is_none(),
    }
}

/// Full and reduced transfer functions at `s = i·2π·f` or `s = i·f`.
pub fn sweep<T: Scalar>(
    sys: &SecondOrderSystem,
    model: &ReducedModel<T>,
    freqs: &[f64],
    scale: FreqScale,
) -> Result<SweepTable> {
    Ok(sweep_models(sys, &[model], freqs, scale)?.remove(0))
}

/// Mass-spring chain: `M = I`, `K = κ·tridiag(−1, 2, −1)`,
/// `D = α·M + β·K`, input at the first node, output at the last.
pub fn synth_system(n: usize, alpha: f64, beta: f64, kappa: f64) -> Result<SecondOrderSystem> {
    if n < 2 {
        return Err(Error::invalid("synthetic chain needs n >= 2"));
    }
    let m = Matrix::<f64>::identity(n);
    let k = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * kappa
        } else if i.abs_diff(j) == 1 {
            -kappa
        } else {
            0.0
        }
    });
    let d = m.scaled(alpha).add(&k.scaled(beta));
    let mut f = vec![0.0; n];
    f[0] = 1.0;
    let mut c = vec![0.0; n];
    c[n - 1] = 1.0;
    SecondOrderSystem::new(m, d, k, f, c)
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
