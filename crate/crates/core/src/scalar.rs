//! Field abstraction shared by the real and complex code paths.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use num_complex::Complex64;

/// Scalar field of the dense kernels: `f64` or `Complex64`.
///
/// Inner products conjugate their first argument, so every algorithm written
/// against this trait is the Hermitian generalisation of its real form.
pub trait Scalar:
    Copy
    + Debug
    + Display
    + LowerExp
    + PartialEq
    + Send
    + Sync
    + Default
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
{
    const IS_COMPLEX: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn from_parts(re: f64, im: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn conj(self) -> Self;
    /// Modulus.
    fn abs(self) -> f64;
    /// Squared modulus.
    fn abs2(self) -> f64;
    fn is_finite(self) -> bool;
    /// Division that reduces to the real quotient when both operands are
    /// real-valued (Smith's algorithm on the complex side).
    fn quot(self, d: Self) -> Self;

    fn scale(self, a: f64) -> Self {
        self * Self::from_real(a)
    }

    /// `self / |self|`, or one for zero.
    fn phase(self) -> Self {
        let m = self.abs();
        if m == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / m)
        }
    }
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn abs2(self) -> f64 {
        self * self
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    #[inline]
    fn quot(self, d: Self) -> Self {
        self / d
    }
    #[inline]
    fn scale(self, a: f64) -> Self {
        self * a
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn abs(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    fn quot(self, d: Self) -> Self {
        let (a, b, c, e) = (self.re, self.im, d.re, d.im);
        if c.abs() >= e.abs() {
            let r = e / c;
            let den = c + e * r;
            Complex64::new((a + b * r) / den, (b - a * r) / den)
        } else {
            let r = c / e;
            let den = c * r + e;
            Complex64::new((a * r + b) / den, (b * r - a) / den)
        }
    }
    #[inline]
    fn scale(self, a: f64) -> Self {
        Complex64::new(self.re * a, self.im * a)
    }
}

/// Unit roundoff of binary64 arithmetic.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_quotient_matches_real_on_real_data() {
        for &(a, c) in &[(1.0, 3.0), (-7.25, 0.1), (1e-300, 7e10)] {
            let z = Complex64::from_real(a).quot(Complex64::from_real(c));
            assert_eq!(z.re.to_bits(), (a / c).to_bits());
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn complex_quotient_general() {
        let z = Complex64::new(1.0, 2.0).quot(Complex64::new(3.0, -4.0));
        let w = Complex64::new(1.0, 2.0) / Complex64::new(3.0, -4.0);
        assert!((z - w).norm() < 1e-16);
        let z = Complex64::new(1.0, 2.0).quot(Complex64::new(0.5, 4.0));
        let w = Complex64::new(1.0, 2.0) / Complex64::new(0.5, 4.0);
        assert!((z - w).norm() < 1e-16);
    }

    #[test]
    fn phase_of_zero_is_one() {
        assert_eq!(0.0f64.phase(), 1.0);
        assert_eq!(Complex64::new(0.0, -2.0).phase(), Complex64::new(0.0, -1.0));
    }
}
