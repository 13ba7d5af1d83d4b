//! Coordinate scalars: `f64` for numeric work, `BigRational` for exact work.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational coordinate type.
pub type Rat = num_rational::BigRational;

/// Arithmetic shared by the two coordinate representations.
///
/// The torus code is generic over this trait so that the numeric and the
/// exact paths run the same algorithms. Exact comparisons (`PartialOrd`)
/// are total for both implementations on the values we produce (no NaN
/// survives `wrap_unit`, which rejects non-finite input upstream).
pub trait TorusScalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// Reduce into `[-1/2, 1/2)`, returning the canonical value and the
    /// integer `k` that was subtracted (`self = canonical + k`).
    fn wrap_unit(&self) -> (Self, i64);
    fn to_f64(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    fn abs(&self) -> Self;
}

impl TorusScalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn wrap_unit(&self) -> (Self, i64) {
        let mut k = (self + 0.5).floor();
        let mut r = self - k;
        // floor(x + 1/2) can land one off when x + 1/2 rounds across an
        // integer; nudge back into [-1/2, 1/2).
        if r >= 0.5 {
            r -= 1.0;
            k += 1.0;
        }
        if r < -0.5 {
            r += 1.0;
            k -= 1.0;
        }
        (r, k as i64)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

impl TorusScalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }

    fn one() -> Self {
        <Rat as One>::one()
    }

    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn wrap_unit(&self) -> (Self, i64) {
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        let k = (self + &half).floor();
        let r = self - &k;
        let k = k
            .to_integer()
            .to_i64()
            .expect("lattice shift exceeds i64 range");
        (r, k)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational out of f64 range")
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

/// Parse a rational literal such as `13/36`, `-13/36`, or `2`.
pub fn parse_rational(s: &str) -> Option<Rat> {
    s.trim().parse::<Rat>().ok()
}

/// Format a rational the way `parse_rational` accepts it.
pub fn format_rational(r: &Rat) -> String {
    r.to_string()
}
