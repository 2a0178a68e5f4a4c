use crate::error::{Error, Result};
use crate::numerics::mp::DEFAULT_DIGITS;
use crate::numerics::scalar::Real;

/// Working-precision contract: decimal digits for all arithmetic and the
/// convergence tolerance derived from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    digits: u32,
    tol_exponent: i32,
}

impl PrecisionConfig {
    pub const MIN_DIGITS: u32 = 15;

    /// `digits` decimal digits with tolerance `10^-(digits-6)`.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(PrecisionConfig {
            digits,
            tol_exponent: -(digits as i32 - 6),
        })
    }

    /// Overrides the convergence tolerance with `10^exponent`.
    pub fn with_tolerance_exponent(mut self, exponent: i32) -> Result<Self> {
        if exponent >= 0 {
            return Err(Error::InvalidInput(
                "convergence tolerance must be below one".into(),
            ));
        }
        self.tol_exponent = exponent;
        Ok(self)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn tolerance_exponent(&self) -> i32 {
        self.tol_exponent
    }

    /// Same contract at `factor` times the digits (used for self-references).
    pub fn scaled(&self, factor: u32) -> Self {
        let digits = self.digits * factor;
        PrecisionConfig {
            digits,
            tol_exponent: self.tol_exponent - (digits - self.digits) as i32,
        }
    }

    /// Convergence tolerance as a scalar, floored at a small multiple of the
    /// scalar's roundoff so that fixed-precision types stay attainable.
    pub fn tolerance<T: Real>(&self) -> T {
        let nominal = T::from_int(10).powi(self.tol_exponent);
        let floor = T::epsilon() * T::from_int(128);
        nominal.max_of(floor)
    }

    /// Tolerance for locating nonlinear parameters: the square root of the
    /// convergence tolerance, capped at `1e-20`.
    pub fn parameter_tolerance<T: Real>(&self) -> T {
        let t = self.tolerance::<T>().sqrt();
        t.max_of(T::from_int(10).powi(-20))
    }

    /// Installs this precision for the current thread until the guard drops.
    pub fn activate<T: Real>(&self) -> PrecisionGuard<T> {
        let previous = T::set_working_digits(self.digits);
        PrecisionGuard {
            previous,
            _marker: std::marker::PhantomData,
        }
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::new(DEFAULT_DIGITS).expect("default precision is valid")
    }
}

/// Restores the previous working precision on drop.
#[must_use = "precision reverts when the guard is dropped"]
pub struct PrecisionGuard<T: Real> {
    previous: u32,
    _marker: std::marker::PhantomData<fn() -> T>,
}

impl<T: Real> Drop for PrecisionGuard<T> {
    fn drop(&mut self) {
        T::set_working_digits(self.previous);
    }
}
