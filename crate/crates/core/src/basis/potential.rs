//! Symbolic potentials: a kinetic scale plus a finite sum of power terms.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::scalar::Real;

/// Exact rational exponent `num/den`, kept in lowest terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Power {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Power {
    pub const fn int(k: i64) -> Self {
        Power { num: k, den: 1 }
    }

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("power with zero denominator".into()));
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Power {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    /// Parses `"6"`, `"-1.95"` or `"3/2"` exactly.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("cannot parse power {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return Power::new(n, d);
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) || frac_part.len() > 12 {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let num: i64 = digits.parse().map_err(|_| bad())?;
        let den = 10i64.pow(frac_part.len() as u32);
        Power::new(if neg { -num } else { num }, den)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.den == 1).then_some(self.num)
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn value<T: Real>(&self) -> T {
        T::ratio(self.num, self.den)
    }

    /// `k/2` as a scalar.
    pub fn half<T: Real>(&self) -> T {
        T::ratio(self.num, 2 * self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            return write!(f, "{}", self.num);
        }
        // terminating decimals print as such, everything else as a fraction
        let mut d = self.den;
        let mut places = 0u32;
        while d % 10 == 0 || d % 2 == 0 || d % 5 == 0 {
            if d % 10 == 0 {
                d /= 10;
            } else if d % 2 == 0 {
                d /= 2;
            } else {
                d /= 5;
            }
            places += 1;
        }
        if d == 1 && places <= 18 {
            let scale = 10i128.pow(places);
            let scaled = self.num as i128 * scale / self.den as i128;
            let sign = if scaled < 0 { "-" } else { "" };
            let a = scaled.abs();
            let frac = format!("{:0width$}", a % scale, width = places as usize);
            write!(f, "{sign}{}.{}", a / scale, frac.trim_end_matches('0'))
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Parity sector of a one-dimensional oscillator basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Full,
}

impl Parity {
    /// Oscillator quantum number of the `j`-th basis function in the sector.
    pub fn index(self, j: usize) -> usize {
        match self {
            Parity::Even => 2 * j,
            Parity::Odd => 2 * j + 1,
            Parity::Full => j,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Full => "full",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    OneDim { parity: Parity },
    Radial { l: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<T> {
    pub power: Power,
    pub coeff: T,
}

impl<T> Term<T> {
    pub fn new(power: Power, coeff: T) -> Self {
        Term { power, coeff }
    }
}

/// `H = s·K + Σ c_k q^k`, where `K` is `-½ d²/dx²` in one dimension and
/// `-½ d²/dr² + l(l+1)/(2r²)` for the reduced radial problem, and `s` is the
/// kinetic scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<T> {
    pub kind: PotentialKind,
    pub kinetic_scale: T,
    pub terms: Vec<Term<T>>,
}

impl<T: Real> Potential<T> {
    pub fn new(kind: PotentialKind, terms: Vec<Term<T>>) -> Result<Self> {
        let p = Potential {
            kind,
            kinetic_scale: T::one(),
            terms,
        };
        p.validate()?;
        Ok(p)
    }

    /// Copy with all coefficients rounded to the current working precision.
    pub fn promote(&self) -> Self {
        Potential {
            kind: self.kind,
            kinetic_scale: self.kinetic_scale.promote(),
            terms: self.terms.iter().map(|t| Term::new(t.power, t.coeff.promote())).collect(),
        }
    }

    pub fn with_kinetic_scale(mut self, scale: T) -> Result<Self> {
        self.kinetic_scale = scale;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.kinetic_scale.is_finite() || !self.kinetic_scale.gt_zero() {
            return Err(Error::InvalidInput("kinetic scale must be positive".into()));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if !t.coeff.is_finite() {
                return Err(Error::InvalidInput(format!("coefficient of r^{} is not finite", t.power)));
            }
            if self.terms[..i].iter().any(|u| u.power == t.power) {
                return Err(Error::InvalidInput(format!("power {} listed twice", t.power)));
            }
            if let PotentialKind::OneDim { .. } = self.kind {
                if t.power.as_integer().map_or(true, |k| k < 0) {
                    return Err(Error::InvalidInput(format!(
                        "one-dimensional powers must be nonnegative integers, got {}",
                        t.power
                    )));
                }
            }
        }
        Ok(())
    }

    /// Coefficient of `power`, zero when absent.
    pub fn coefficient(&self, power: Power) -> T {
        self.terms
            .iter()
            .find(|t| t.power == power)
            .map_or_else(T::zero, |t| t.coeff.clone())
    }

    pub fn parity(&self) -> Option<Parity> {
        match self.kind {
            PotentialKind::OneDim { parity } => Some(parity),
            PotentialKind::Radial { .. } => None,
        }
    }

    pub fn angular_momentum(&self) -> Option<u32> {
        match self.kind {
            PotentialKind::Radial { l } => Some(l),
            PotentialKind::OneDim { .. } => None,
        }
    }

    /// Same potential restricted to another parity sector.
    pub fn in_sector(&self, parity: Parity) -> Self {
        let mut p = self.clone();
        if let PotentialKind::OneDim { .. } = p.kind {
            p.kind = PotentialKind::OneDim { parity };
        }
        p
    }

    /// True when every power is even, so parity sectors decouple.
    pub fn is_parity_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.power.as_integer().is_some_and(|k| k % 2 == 0) || t.coeff.is_zero())
    }

    /// Most negative power present, if any.
    pub fn most_singular_power(&self) -> Option<Power> {
        self.terms
            .iter()
            .filter(|t| t.power.is_negative() && !t.coeff.is_zero())
            .map(|t| t.power)
            .min()
    }

    /// Strict lower bound on γ from the negative powers alone.
    pub fn singular_gamma_bound(&self) -> T {
        match self.most_singular_power() {
            Some(k) => -k.half::<T>(),
            None => T::zero(),
        }
    }

    /// Strict lower bound on γ for the radial basis, including the `1/r²`
    /// coupling from the basis centrifugal term.
    pub fn gamma_lower_bound(&self) -> T {
        self.singular_gamma_bound().max_of(T::one())
    }

    /// Free-particle quadratic coefficient ω² in the `K + ω²q²/2` convention.
    pub fn omega_squared(&self) -> T {
        self.coefficient(Power::int(2)) * T::from_int(2) / &self.kinetic_scale
    }

    // presets

    /// `p²/2 + ω²x²/2 + λx⁴`.
    pub fn quartic(omega_sq: T, lambda: T, parity: Parity) -> Result<Self> {
        Self::new(
            PotentialKind::OneDim { parity },
            vec![
                Term::new(Power::int(2), omega_sq / T::from_int(2)),
                Term::new(Power::int(4), lambda),
            ],
        )
    }

    /// `p²/2 + ω²x²/2 + λx⁶`.
    pub fn sextic(omega_sq: T, lambda: T, parity: Parity) -> Result<Self> {
        Self::new(
            PotentialKind::OneDim { parity },
            vec![
                Term::new(Power::int(2), omega_sq / T::from_int(2)),
                Term::new(Power::int(6), lambda),
            ],
        )
    }

    /// `-(g/2)d²/dx² + (x² − 1/4)²/(2g)`.
    pub fn double_well(g: T, parity: Parity) -> Result<Self> {
        let two_g = g.clone() * T::from_int(2);
        Self::new(
            PotentialKind::OneDim { parity },
            vec![
                Term::new(Power::int(0), T::one() / (two_g.clone() * T::from_int(16))),
                Term::new(Power::int(2), -(T::one() / (two_g.clone() * T::from_int(2)))),
                Term::new(Power::int(4), T::one() / two_g),
            ],
        )?
        .with_kinetic_scale(g)
    }

    /// Radial `K + ω²r²/2 + λr^k`.
    pub fn radial_power(l: u32, omega_sq: T, lambda: T, k: Power) -> Result<Self> {
        if k == Power::int(2) {
            return Err(Error::InvalidInput("anharmonic power must differ from 2".into()));
        }
        Self::new(
            PotentialKind::Radial { l },
            vec![
                Term::new(Power::int(2), omega_sq / T::from_int(2)),
                Term::new(k, lambda),
            ],
        )
    }

    /// Radial spiked oscillator `K + ω²r²/2 + λ/r⁶`.
    pub fn spiked(l: u32, omega: T, lambda: T) -> Result<Self> {
        Self::radial_power(l, omega.square(), lambda, Power::int(-6))
    }

    /// Relative-motion harmonium `-d²/dr² + l(l+1)/r² + ω²r² + λ/r`.
    pub fn harmonium(l: u32, omega: T, lambda: T) -> Result<Self> {
        Self::new(
            PotentialKind::Radial { l },
            vec![
                Term::new(Power::int(2), omega.square()),
                Term::new(Power::int(-1), lambda),
            ],
        )?
        .with_kinetic_scale(T::from_int(2))
    }

    /// Radial `K + r^s + r^t`.
    pub fn two_power(l: u32, s: Power, t: Power) -> Result<Self> {
        Self::new(
            PotentialKind::Radial { l },
            vec![Term::new(s, T::one()), Term::new(t, T::one())],
        )
    }
}
