//! Scalar kinds the evaluator and matrix kernels are generic over.
//!
//! [`Dual`] is a dual-complex number `z + z'·ε` with `ε² = 0`. Carrying one
//! tangent per evaluation pass is enough to read off a single partial
//! derivative from the `eps` part of any result.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Arithmetic needed by the matrix kernels and the expression evaluator.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Lift a plain complex constant (zero tangent).
    fn constant(c: Complex64) -> Self;

    /// The value part.
    fn value(&self) -> Complex64;

    fn exp(self) -> Self;

    fn is_finite(&self) -> bool;

    fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    /// Magnitude of the value part, used for pivoting and norms.
    fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn constant(c: Complex64) -> Self {
        c
    }

    #[inline]
    fn value(&self) -> Complex64 {
        *self
    }

    #[inline]
    fn exp(self) -> Self {
        Complex64::exp(self)
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Dual-complex number: value `re` and first-order tangent `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual {
    pub re: Complex64,
    pub eps: Complex64,
}

impl Dual {
    pub const fn new(re: Complex64, eps: Complex64) -> Self {
        Dual { re, eps }
    }

    /// An independent variable: tangent is one.
    pub fn variable(x: f64) -> Self {
        Dual::new(Complex64::new(x, 0.0), Complex64::new(1.0, 0.0))
    }
}

impl Scalar for Dual {
    #[inline]
    fn constant(c: Complex64) -> Self {
        Dual::new(c, Complex64::new(0.0, 0.0))
    }

    #[inline]
    fn value(&self) -> Complex64 {
        self.re
    }

    #[inline]
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, e * self.eps)
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.is_finite()
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.re * rhs.re, self.eps * rhs.re + self.re * rhs.eps)
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, rhs: Dual) -> Dual {
        // value part goes through the same complex division as the plain path
        let re = self.re / rhs.re;
        let eps = (self.eps * rhs.re - self.re * rhs.eps) / (rhs.re * rhs.re);
        Dual::new(re, eps)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}
