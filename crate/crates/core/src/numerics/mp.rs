//! MPFR-backed binary floating point with a thread-local working precision.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rug::float::Constant;
use rug::Float;

use super::scalar::Real;

/// Decimal digits used when nothing else has been requested.
pub const DEFAULT_DIGITS: u32 = 30;

const GUARD_BITS: u32 = 10;

thread_local! {
    static DIGITS: Cell<u32> = const { Cell::new(DEFAULT_DIGITS) };
}

fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

fn bits() -> u32 {
    DIGITS.with(|d| digits_to_bits(d.get()))
}

/// Arbitrary-precision real number.
///
/// Every constructor rounds to the precision of the calling thread. Binary
/// operators update the left operand in place and keep its precision.
#[derive(PartialEq, PartialOrd)]
pub struct BigFloat(pub Float);

impl Clone for BigFloat {
    fn clone(&self) -> Self {
        BigFloat(self.0.clone())
    }

    fn clone_from(&mut self, source: &Self) {
        self.0.clone_from(&source.0);
    }
}

impl BigFloat {
    pub fn new<T>(val: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigFloat(Float::with_val(bits(), val))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(DIGITS.with(|d| d.get()) as usize))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_decimal(p + 1)),
            None => write!(f, "{}", self.to_decimal(DIGITS.with(|d| d.get()) as usize)),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(mut self, rhs: BigFloat) -> BigFloat {
                $atr::$am(&mut self.0, &rhs.0);
                self
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(mut self, rhs: &'a BigFloat) -> BigFloat {
                $atr::$am(&mut self.0, &rhs.0);
                self
            }
        }
        impl $atr<BigFloat> for BigFloat {
            fn $am(&mut self, rhs: BigFloat) {
                $atr::$am(&mut self.0, &rhs.0);
            }
        }
        impl<'a> $atr<&'a BigFloat> for BigFloat {
            fn $am(&mut self, rhs: &'a BigFloat) {
                $atr::$am(&mut self.0, &rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);
binop!(Rem, rem, RemAssign, rem_assign);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat::new(1)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        let parsed = Float::parse_radix(s, radix as i32).map_err(|e| e.to_string())?;
        Ok(BigFloat::new(parsed))
    }
}

impl Signed for BigFloat {
    fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self.clone() - other
        }
    }
    fn signum(&self) -> Self {
        if self.0.is_sign_negative() && !self.0.is_zero() {
            -Self::one()
        } else if self.0.is_zero() {
            Self::zero()
        } else {
            Self::one()
        }
    }
    fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }
    fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }
}

impl FromPrimitive for BigFloat {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat::new(n))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat::new(n))
    }
    fn from_f64(n: f64) -> Option<Self> {
        n.is_finite().then(|| BigFloat::new(n))
    }
}

impl ToPrimitive for BigFloat {
    fn to_i64(&self) -> Option<i64> {
        let t = self.0.to_f64().trunc();
        (t.is_finite() && t.abs() < 9.2e18).then(|| t as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.0.to_f64().trunc();
        (t.is_finite() && (0.0..1.8e19).contains(&t)).then(|| t as u64)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.to_f64())
    }
}

impl Sum for BigFloat {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(BigFloat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a BigFloat> for BigFloat {
    fn sum<I: Iterator<Item = &'a BigFloat>>(iter: I) -> Self {
        iter.fold(BigFloat::zero(), |acc, x| acc + x)
    }
}

impl Product for BigFloat {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(BigFloat::one(), |acc, x| acc * x)
    }
}

impl Real for BigFloat {
    fn set_working_digits(digits: u32) -> u32 {
        DIGITS.with(|d| d.replace(digits))
    }

    fn working_digits() -> u32 {
        DIGITS.with(|d| d.get())
    }

    fn epsilon() -> Self {
        let b = bits() as i32;
        BigFloat(Float::with_val(bits(), 1) >> (b - 1))
    }

    fn pi() -> Self {
        BigFloat::new(Constant::Pi)
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        Float::parse(s.trim()).ok().map(BigFloat::new)
    }

    fn promote(&self) -> Self {
        BigFloat::new(&self.0)
    }

    fn sqrt(&self) -> Self {
        BigFloat(self.0.clone().sqrt())
    }

    fn exp(&self) -> Self {
        BigFloat(self.0.clone().exp())
    }

    fn ln(&self) -> Self {
        BigFloat(self.0.clone().ln())
    }

    fn ln_gamma(&self) -> Self {
        BigFloat(self.0.clone().ln_gamma())
    }

    fn gamma(&self) -> Self {
        BigFloat(self.0.clone().gamma())
    }

    fn powf(&self, e: &Self) -> Self {
        let mut out = self.0.clone();
        rug::ops::PowAssign::pow_assign(&mut out, &e.0);
        BigFloat(out)
    }

    fn powi(&self, n: i32) -> Self {
        let mut out = self.0.clone();
        rug::ops::PowAssign::pow_assign(&mut out, n);
        BigFloat(out)
    }

    fn sin(&self) -> Self {
        BigFloat(self.0.clone().sin())
    }

    fn cos(&self) -> Self {
        BigFloat(self.0.clone().cos())
    }

    fn atan(&self) -> Self {
        BigFloat(self.0.clone().atan())
    }

    fn sinh(&self) -> Self {
        BigFloat(self.0.clone().sinh())
    }

    fn cosh(&self) -> Self {
        BigFloat(self.0.clone().cosh())
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn to_decimal(&self, digits: usize) -> String {
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        if self.0.is_zero() {
            return "0".to_string();
        }
        // rug prints "d.ddde±x"; normalise to the f64 `{:e}` style
        let raw = self.0.to_string_radix(10, Some(digits.max(1)));
        match raw.split_once('e') {
            Some((mant, exp)) => {
                let e: i64 = exp.parse().unwrap_or(0);
                format!("{mant}e{e}")
            }
            None => normalise_plain(&raw),
        }
    }

    fn max_of(self, other: Self) -> Self {
        match other.partial_cmp(&self) {
            Some(Ordering::Greater) => other,
            _ => self,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_output_is_normalised() {
        assert_eq!(normalise_plain("12.3680"), "1.23680e1");
        assert_eq!(normalise_plain("-0.00310"), "-3.10e-3");
        assert_eq!(normalise_plain("6.000"), "6.000e0");
        assert_eq!(normalise_plain("0.000"), "0");
        let prev = BigFloat::set_working_digits(40);
        let x = BigFloat::from_int(1237) / BigFloat::from_int(100);
        assert_eq!(x.to_decimal(6), "1.23700e1");
        assert_eq!(BigFloat::parse_decimal(&x.to_decimal(30)).unwrap(), x);
        BigFloat::set_working_digits(prev);
    }

    #[test]
    fn precision_follows_thread_setting() {
        let prev = BigFloat::set_working_digits(60);
        let two = BigFloat::from_int(2);
        assert!(two.precision_bits() >= 200);
        let r = two.sqrt();
        let s = r.to_decimal(50);
        assert!(s.starts_with("1.4142135623730950488016887242096980785696718753769"));
        BigFloat::set_working_digits(prev);
    }

    #[test]
    fn epsilon_tracks_bits() {
        let prev = BigFloat::set_working_digits(30);
        let eps = BigFloat::epsilon();
        let one = BigFloat::one();
        assert!(one.clone() + &eps > one);
        let half = eps.clone() / BigFloat::from_int(4);
        assert!(one.clone() + &half == one);
        BigFloat::set_working_digits(prev);
    }

    #[test]
    fn decimal_round_trip() {
        let prev = BigFloat::set_working_digits(40);
        let x = BigFloat::parse_decimal("-1.95").unwrap();
        let s = x.to_decimal(40);
        let y = BigFloat::parse_decimal(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(BigFloat::ratio(-195, 100), x);
        BigFloat::set_working_digits(prev);
    }
}

/// Rewrites a plain decimal such as `-12.5` or `0.0031` as `d.ddde±x`.
fn normalise_plain(raw: &str) -> String {
    let (sign, body) = match raw.strip_prefix('-') {
        Some(b) => ("-", b),
        None => ("", raw),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: String = int.chars().chain(frac.chars()).collect();
    let Some(lead) = digits.find(|c: char| c != '0') else {
        return "0".to_string();
    };
    let exp = int.len() as i64 - 1 - lead as i64;
    let sig = digits[lead..].trim_end_matches('0');
    let sig = if sig.is_empty() { "0" } else { sig };
    let tail_len = digits.len() - lead;
    let (first, rest) = sig.split_at(1);
    // keep trailing zeros that were significant in the original output
    let pad = tail_len.saturating_sub(sig.len());
    let rest = format!("{rest}{}", "0".repeat(pad));
    if rest.is_empty() {
        format!("{sign}{first}e{exp}")
    } else {
        format!("{sign}{first}.{rest}e{exp}")
    }
}
