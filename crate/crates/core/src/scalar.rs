//! Coefficient field abstraction.
//!
//! Everything in the engine is generic over a [`Scalar`]. The exact
//! instantiation is [`Rational`] (arbitrary precision); `f64` and `f32` are
//! provided for quick numerical exploration, where exact zero tests are only
//! as good as the floating point cancellation.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact rational coefficients.
pub type Rational = BigRational;

pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + std::ops::Neg<Output = Self> + Send + Sync + 'static {
    /// Build `num / den`. `den` must be nonzero.
    fn from_ratio(num: BigInt, den: BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(BigInt::from(v), BigInt::one())
    }

    /// Numerator and denominator, if the value is an exact rational.
    fn to_ratio(&self) -> Option<(BigInt, BigInt)>;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `(-1)^k` as a scalar.
    fn sign(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Self::one()
        } else {
            -Self::one()
        }
    }

    /// Exact `p/q` string (always with a denominator) for rationals, the
    /// shortest round-trip decimal otherwise.
    fn ratio_string(&self) -> String {
        match self.to_ratio() {
            Some((n, d)) => format!("{n}/{d}"),
            None => format!("{self}"),
        }
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: BigInt, den: BigInt) -> Self {
        BigRational::new(num, den)
    }

    fn to_ratio(&self) -> Option<(BigInt, BigInt)> {
        Some((self.numer().clone(), self.denom().clone()))
    }

    fn is_exact() -> bool {
        true
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: BigInt, den: BigInt) -> Self {
                let n = num.to_f64().unwrap_or(f64::NAN);
                let d = den.to_f64().unwrap_or(f64::NAN);
                (n / d) as $t
            }

            fn to_ratio(&self) -> Option<(BigInt, BigInt)> {
                if self.fract() == 0.0 && self.is_finite() && <$t>::abs(*self) < 1e15 {
                    Some((BigInt::from(*self as i64), BigInt::one()))
                } else {
                    None
                }
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// Parse an integer or `p/q` literal.
pub fn parse_ratio<S: Scalar>(text: &str) -> Option<S> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = n.parse().ok()?;
    let den: BigInt = d.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(S::from_ratio(num, den))
}
