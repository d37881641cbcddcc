//! Extended-precision reals (MPFR via `rug`) and a small numeric trait shared with `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

pub const DEFAULT_PRECISION: u32 = 200;

/// An MPFR float. Every value carries its precision; binary operations on values of
/// different precision panic.
#[derive(Clone, PartialEq)]
pub struct BigReal(pub Float);

impl BigReal {
    pub fn with_f64(prec: u32, v: f64) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigReal(Float::with_val(prec, 1))
    }

    pub fn from_int(prec: u32, v: i64) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn ratio(prec: u32, num: i64, den: i64) -> Self {
        BigReal(Float::with_val(prec, num) / den)
    }

    /// Parses a decimal string at the given precision.
    pub fn parse(prec: u32, s: &str) -> Option<Self> {
        Float::parse(s.trim()).ok().map(|p| BigReal(Float::with_val(prec, p)))
    }

    pub fn ln2(prec: u32) -> Self {
        BigReal(Float::with_val(prec, Constant::Log2))
    }

    pub fn pi(prec: u32) -> Self {
        BigReal(Float::with_val(prec, Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn powi(&self, n: i32) -> Self {
        BigReal(self.0.clone().pow(n))
    }

    pub fn sinh(&self) -> Self {
        BigReal(self.0.clone().sinh())
    }

    pub fn sin(&self) -> Self {
        BigReal(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        BigReal(self.0.clone().cos())
    }

    pub fn log2(&self) -> Self {
        BigReal(self.0.clone().log2())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Shortest decimal string that reads back to the same value at this precision.
    pub fn to_exact_string(&self) -> String {
        self.0.to_string_radix(10, None)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_digits(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.0.prec(), other.0.prec(), "mixed-precision arithmetic");
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(25)))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.0.prec() as f64 * std::f64::consts::LOG10_2) as usize;
        write!(f, "{}", self.0.to_string_radix(10, Some(digits.max(1))))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! big_binop {
    ($tr:ident, $f:ident, $tra:ident, $fa:ident) => {
        impl $tra<&BigReal> for BigReal {
            fn $fa(&mut self, rhs: &BigReal) {
                self.check(rhs);
                self.0.$fa(&rhs.0);
            }
        }
        impl $tra<BigReal> for BigReal {
            fn $fa(&mut self, rhs: BigReal) {
                self.check(&rhs);
                self.0.$fa(rhs.0);
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $f(mut self, rhs: BigReal) -> BigReal {
                $tra::$fa(&mut self, &rhs);
                self
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $f(mut self, rhs: &BigReal) -> BigReal {
                $tra::$fa(&mut self, rhs);
                self
            }
        }
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $f(self, rhs: &BigReal) -> BigReal {
                let mut out = self.clone();
                $tra::$fa(&mut out, rhs);
                out
            }
        }
    };
}

big_binop!(Add, add, AddAssign, add_assign);
big_binop!(Sub, sub, SubAssign, sub_assign);
big_binop!(Mul, mul, MulAssign, mul_assign);
big_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

/// Arithmetic shared by the `f64` and [`BigReal`] code paths.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn from_big(v: &BigReal) -> Self;
    /// A constant at the same precision as `self`.
    fn lit(&self, v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn ln_1p(&self) -> Self;
    fn exp(&self) -> Self;
    fn exp_m1(&self) -> Self;
    fn abs(&self) -> Self;
    /// `self · 2^k`, exact.
    fn mul_pow2(&self, k: i32) -> Self;
    fn floor_i64(&self) -> i64;
    fn is_integer(&self) -> bool;
    fn ln2_like(&self) -> Self;
}

impl Real for f64 {
    fn from_big(v: &BigReal) -> Self {
        v.0.to_f64()
    }
    fn lit(&self, v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn ln_1p(&self) -> Self {
        f64::ln_1p(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn exp_m1(&self) -> Self {
        f64::exp_m1(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn mul_pow2(&self, k: i32) -> Self {
        self * 2f64.powi(k)
    }
    fn floor_i64(&self) -> i64 {
        self.floor() as i64
    }
    fn is_integer(&self) -> bool {
        self.fract() == 0.0
    }
    fn ln2_like(&self) -> Self {
        std::f64::consts::LN_2
    }
}

impl Real for BigReal {
    fn from_big(v: &BigReal) -> Self {
        v.clone()
    }
    fn lit(&self, v: f64) -> Self {
        BigReal::with_f64(self.prec(), v)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }
    fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }
    fn ln_1p(&self) -> Self {
        BigReal(self.0.clone().ln_1p())
    }
    fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }
    fn exp_m1(&self) -> Self {
        BigReal(self.0.clone().exp_m1())
    }
    fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }
    fn mul_pow2(&self, k: i32) -> Self {
        let mut v = self.0.clone();
        if k >= 0 {
            v <<= k as u32;
        } else {
            v >>= (-k) as u32;
        }
        BigReal(v)
    }
    fn floor_i64(&self) -> i64 {
        self.0.clone().floor().to_f64() as i64
    }
    fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
    fn ln2_like(&self) -> Self {
        BigReal::ln2(self.prec())
    }
}

/// Serialized as a decimal string with 30 significant digits.
impl serde::Serialize for BigReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_digits(30))
    }
}
