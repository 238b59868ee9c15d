//! Level-1 kernels on plain slices.

use crate::scalar::Scalar;

/// `xᴴy`.
#[inline]
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a.conj() * b).sum()
}

#[inline]
pub fn norm2_sq<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|v| v.abs2()).sum()
}

/// Euclidean norm; rescales only when the plain sum of squares under- or
/// overflows.
pub fn norm2<T: Scalar>(x: &[T]) -> f64 {
    let ss = norm2_sq(x);
    if ss.is_finite() && ss > f64::MIN_POSITIVE {
        return ss.sqrt();
    }
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    let inv = 1.0 / big;
    big * x.iter().map(|v| v.scale(inv).abs2()).sum::<f64>().sqrt()
}

/// `y += a·x`.
#[inline]
pub fn axpy<T: Scalar>(a: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
pub fn scale_in_place<T: Scalar>(x: &mut [T], a: f64) {
    for v in x.iter_mut() {
        *v = v.scale(a);
    }
}

/// `x /= d`, entrywise division (exact for representable quotients).
#[inline]
pub fn div_in_place<T: Scalar>(x: &mut [T], d: f64) {
    let d = T::from_real(d);
    for v in x.iter_mut() {
        *v = v.quot(d);
    }
}

pub fn sub<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

pub fn add<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| a + b).collect()
}

/// Unit vector `e_i` of length `n`.
pub fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

pub fn to_scalar<T: Scalar>(x: &[f64]) -> Vec<T> {
    x.iter().map(|&v| T::from_real(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;

    #[test]
    fn dot_conjugates_first_argument() {
        let x = [Complex64::new(0.0, 1.0)];
        let y = [Complex64::new(0.0, 1.0)];
        assert_eq!(dot(&x, &y), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn norm_survives_extreme_scales() {
        assert!((norm2(&[3e200, 4e200]) / 5e200 - 1.0).abs() < 1e-15);
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
        assert!((norm2(&[3e-200, 4e-200]) - 5e-200).abs() < 1e-214);
        assert_eq!(norm2::<f64>(&[]), 0.0);
    }
}
