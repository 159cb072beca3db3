//! Mantissa/exponent carrier for values that leave the f64 range.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const LN2_HI: f64 = std::f64::consts::LN_2;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;

const EXP_REDUCTION_MAX: f64 = 4_503_599_627_370_496.0; // 2^52

/// `2^e` for `e` in the normal exponent range.
#[inline]
pub(crate) fn pow2(e: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `x * 2^e` with a single rounding, saturating to 0 or infinity.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    while e > 1000 {
        x *= pow2(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= pow2(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * pow2(e)
}

/// Split a finite nonzero `x` into `(m, e)` with `|m|` in `[1, 2)`.
pub fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let mut bits = x.to_bits();
    let mut bias = 0i64;
    if (bits >> 52) & 0x7ff == 0 {
        // subnormal
        bits = (x * pow2(64)).to_bits();
        bias = -64;
    }
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    (m, e + bias)
}

/// A real number `mantissa * 2^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    exponent: i64,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal { mantissa: 0.0, exponent: 0 };
    pub const ONE: ScaledReal = ScaledReal { mantissa: 1.0, exponent: 0 };

    /// Builds `m * 2^e` and normalizes. Non-finite `m` is a programming error.
    pub fn new(m: f64, e: i64) -> Self {
        assert!(m.is_finite(), "ScaledReal mantissa must be finite");
        if m == 0.0 {
            return Self::ZERO;
        }
        let (mm, ee) = frexp(m);
        ScaledReal { mantissa: mm, exponent: e + ee }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    pub fn mantissa(self) -> f64 {
        self.mantissa
    }

    pub fn exponent(self) -> i64 {
        self.exponent
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn abs(self) -> Self {
        ScaledReal { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// Nearest f64; overflows to +-inf and underflows through subnormals to 0.
    pub fn to_f64(self) -> f64 {
        if self.exponent > 1100 {
            return self.mantissa * f64::INFINITY;
        }
        if self.exponent < -1100 {
            return self.mantissa * 0.0;
        }
        ldexp(self.mantissa, self.exponent)
    }

    /// `log2 |x|`; `-inf` for zero.
    pub fn log2_abs(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().log2() + self.exponent as f64
    }

    /// `ln |x|`; `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().ln() + self.exponent as f64 * LN2_HI
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(self, k: i64) -> Self {
        if self.is_zero() {
            return self;
        }
        ScaledReal { mantissa: self.mantissa, exponent: self.exponent + k }
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Self {
        assert!(self.mantissa >= 0.0, "sqrt of negative ScaledReal");
        if self.is_zero() {
            return self;
        }
        if self.exponent % 2 == 0 {
            Self::new(self.mantissa.sqrt(), self.exponent / 2)
        } else {
            Self::new((2.0 * self.mantissa).sqrt(), (self.exponent - 1).div_euclid(2))
        }
    }

    /// `e^{-x}` for finite `x`, keeping full relative accuracy far outside the f64 range.
    /// Beyond `|x| = 2^52` the reduction is no longer exact: large positive `x` gives zero,
    /// large negative `x` panics.
    pub fn exp_neg(x: f64) -> Self {
        assert!(x.is_finite(), "exp_neg of non-finite argument");
        if x > EXP_REDUCTION_MAX {
            return Self::ZERO;
        }
        assert!(x >= -EXP_REDUCTION_MAX, "exp_neg: e^{{{}}} is out of range", -x);
        let k = (x / LN2_HI).round();
        let p = k * LN2_HI;
        let err = k.mul_add(LN2_HI, -p);
        let r = ((x - p) - err) - k * LN2_LO;
        Self::new((-r).exp(), -(k as i64))
    }

    pub fn exp(x: f64) -> Self {
        Self::exp_neg(-x)
    }
}

impl Default for ScaledReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for ScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl From<f64> for ScaledReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for ScaledReal {
    type Output = Self;
    fn neg(self) -> Self {
        ScaledReal { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Add for ScaledReal {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent { (self, rhs) } else { (rhs, self) };
        let d = big.exponent - small.exponent;
        if d > 64 {
            return big;
        }
        Self::new(big.mantissa + ldexp(small.mantissa, -d), big.exponent)
    }
}

impl Sub for ScaledReal {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ScaledReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul<f64> for ScaledReal {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self * Self::from_f64(rhs)
    }
}

impl Div for ScaledReal {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "ScaledReal division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl PartialOrd for ScaledReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = *self - *other;
        d.mantissa.partial_cmp(&0.0)
    }
}

/// Running sum of `w * l^2` where each `l` comes with its own power-of-two scale
/// that only grows. Used by the Laguerre recurrences.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SquareSum {
    acc: f64,
    scale: i64,
}

impl SquareSum {
    pub(crate) fn new() -> Self {
        SquareSum { acc: 0.0, scale: 0 }
    }

    /// Adds `w * (l * 2^scale)^2`; `scale` must be non-decreasing across calls.
    #[inline]
    pub(crate) fn add(&mut self, w: f64, l: f64, scale: i64) {
        if scale != self.scale {
            debug_assert!(scale > self.scale);
            self.acc = ldexp(self.acc, -2 * (scale - self.scale));
            self.scale = scale;
        }
        self.acc += w * l * l;
    }

    pub(crate) fn value(&self) -> ScaledReal {
        ScaledReal::from_f64(self.acc).mul_pow2(2 * self.scale)
    }
}
