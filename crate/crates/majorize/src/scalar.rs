//! Exact rational scalars and `p`-norm exponents.
//!
//! Every decision procedure in this crate compares scalars exactly, so the
//! scalar type wraps an arbitrary-precision rational kept in canonical form
//! (reduced, positive denominator). Floating point appears only in norm
//! values for non-unit exponents, and those are flagged as approximate.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("empty scalar literal")]
    Empty,
    #[error("malformed scalar literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// An exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`. Panics if `den == 0`; use [`Scalar::from_str`] for
    /// untrusted input.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "scalar denominator must be nonzero");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator(format!("{num}/{den}")));
        }
        Ok(Scalar(BigRational::new(num, den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// `self` raised to a nonnegative integer power, exactly.
    pub fn pow_u32(&self, exp: u32) -> Scalar {
        let mut acc = BigRational::one();
        for _ in 0..exp {
            acc *= &self.0;
        }
        Scalar(acc)
    }

    /// Nearest binary float; exact rationals of moderate size round within
    /// one ulp.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// Accepts `a/b`, plain integers, and terminating decimals such as `-0.25`.
impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ScalarError::Empty);
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| ScalarError::Malformed(s.to_string()))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| ScalarError::Malformed(s.to_string()))?;
            return Scalar::from_big(num, den);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let negative = whole.starts_with('-');
            let whole: BigInt = if whole == "-" || whole.is_empty() {
                BigInt::zero()
            } else {
                whole
                    .parse()
                    .map_err(|_| ScalarError::Malformed(s.to_string()))?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ScalarError::Malformed(s.to_string()));
            }
            let frac_num: BigInt = frac
                .parse()
                .map_err(|_| ScalarError::Malformed(s.to_string()))?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let magnitude = whole.abs() * &scale + frac_num;
            let signed = if negative { -magnitude } else { magnitude };
            return Scalar::from_big(signed, scale);
        }
        let n: BigInt = s
            .parse()
            .map_err(|_| ScalarError::Malformed(s.to_string()))?;
        Ok(Scalar(BigRational::from_integer(n)))
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        Scalar(self.0 / rhs.0)
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PNormError {
    #[error("norm exponent must satisfy p >= 1, got {0}")]
    BelowOne(Scalar),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A norm exponent `p >= 1`, kept as an exact rational so that the unit
/// exponent can be recognised and evaluated exactly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PNorm(Scalar);

impl PNorm {
    pub fn new(p: Scalar) -> Result<Self, PNormError> {
        if p < Scalar::one() {
            return Err(PNormError::BelowOne(p));
        }
        Ok(PNorm(p))
    }

    pub fn one() -> Self {
        PNorm(Scalar::one())
    }

    pub fn from_int(p: i64) -> Result<Self, PNormError> {
        PNorm::new(Scalar::from_int(p))
    }

    pub fn is_one(&self) -> bool {
        self.0 == Scalar::one()
    }

    /// The exponent as a nonnegative integer, when it is one.
    pub fn as_u32(&self) -> Option<u32> {
        if !self.0.is_integer() {
            return None;
        }
        self.0.numer().to_u32()
    }

    pub fn value(&self) -> &Scalar {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl FromStr for PNorm {
    type Err = PNormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PNorm::new(s.parse::<Scalar>()?)
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A norm evaluation: exact for the unit exponent, binary float otherwise.
///
/// Approximate values carry a relative error no worse than 1e-12 at the
/// window sizes this crate targets.
#[derive(Clone, PartialEq, Debug)]
pub enum NormValue {
    Exact(Scalar),
    Approx(f64),
}

impl NormValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            NormValue::Exact(s) => s.to_f64(),
            NormValue::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NormValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Scalar> {
        match self {
            NormValue::Exact(s) => Some(s),
            NormValue::Approx(_) => None,
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(s) => write!(f, "{s}"),
            NormValue::Approx(x) => write!(f, "{x} (approx)"),
        }
    }
}

/// Total order helper for sorting scalar slices in non-increasing order.
pub(crate) fn cmp_desc(a: &Scalar, b: &Scalar) -> Ordering {
    b.cmp(a)
}
