//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Real field used throughout the solver.
///
/// Arithmetic with a borrowed right-hand side is required so that
/// heap-backed scalars can update in place. Implementations with a runtime
/// precision (see [`crate::BigFloat`]) read it from a thread-local setting
/// installed by [`crate::PrecisionConfig::activate`]; values should only be
/// mixed within a single precision scope.
pub trait Real:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + NumAssign
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Sum
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// Sets the thread's working precision in decimal digits and returns the
    /// previous setting. Fixed-precision types ignore the request.
    fn set_working_digits(digits: u32) -> u32;

    /// Decimal digits actually carried by newly created values.
    fn working_digits() -> u32;

    /// Unit roundoff of the current working precision.
    fn epsilon() -> Self;

    fn pi() -> Self;

    /// Parses a decimal literal such as `-1.95` or `2.5e-3` at full working
    /// precision.
    fn parse_decimal(s: &str) -> Option<Self>;

    /// Re-creates the value at the current working precision.
    fn promote(&self) -> Self {
        self.clone()
    }

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn ln_gamma(&self) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan(&self) -> Self;
    fn is_finite(&self) -> bool;

    /// Scientific notation with `digits` significant digits.
    fn to_decimal(&self, digits: usize) -> String;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn from_len(n: usize) -> Self {
        Self::from_int(n as i64)
    }

    fn sinh(&self) -> Self {
        let e = self.exp();
        let inv = Self::one() / &e;
        (e - inv) / Self::from_int(2)
    }

    fn cosh(&self) -> Self {
        let e = self.exp();
        let inv = Self::one() / &e;
        (e + inv) / Self::from_int(2)
    }

    fn gamma(&self) -> Self {
        self.ln_gamma().exp()
    }

    fn log10(&self) -> Self {
        self.ln() / Self::from_int(10).ln()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Strictly greater than zero (unlike `Signed::is_positive`, false for
    /// `+0.0`).
    fn gt_zero(&self) -> bool {
        *self > Self::zero()
    }

    /// Strictly less than zero.
    fn lt_zero(&self) -> bool {
        *self < Self::zero()
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn lossy_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn set_working_digits(_digits: u32) -> u32 {
        Self::working_digits()
    }

    fn working_digits() -> u32 {
        f64::DIGITS + 1
    }

    fn epsilon() -> Self {
        f64::EPSILON
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn ln_gamma(&self) -> Self {
        ln_gamma_f64(*self)
    }

    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }

    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn atan(&self) -> Self {
        f64::atan(*self)
    }

    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }

    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }
}

// Lanczos approximation (g = 7, n = 9), accurate to ~1e-15 for x > 0.
fn ln_gamma_f64(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection; only the magnitude is returned
        let s = (std::f64::consts::PI * x).sin().abs();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma_f64(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
