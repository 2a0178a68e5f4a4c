use crate::basis::potential::Power;
use crate::error::{Error, Result};
use crate::numerics::scalar::Real;

/// Which parameter the scaled problem normalises to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingForm {
    /// `E(ω², λ) = λ^{2/(k+2)} E(ω² λ^{-4/(k+2)}, 1)`.
    UnitCoupling,
    /// `E(ω², λ) = ω E(1, λ ω^{-(k+2)/2})`, for `ω² > 0`.
    UnitFrequency,
}

/// `E(ω², λ) = factor · E(omega_sq, lambda)` for `K + ω²q²/2 + λq^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transport<T> {
    pub factor: T,
    pub omega_sq: T,
    pub lambda: T,
}

pub fn scaling_relation<T: Real>(omega_sq: &T, lambda: &T, k: Power, form: ScalingForm) -> Result<Transport<T>> {
    if k == Power::int(-2) {
        return Err(Error::InvalidInput("k = -2 has no scaling relation".into()));
    }
    let kp2 = k.value::<T>() + T::from_int(2);
    match form {
        ScalingForm::UnitCoupling => {
            if !lambda.gt_zero() {
                return Err(Error::InvalidInput("coupling must be positive".into()));
            }
            let factor = lambda.powf(&(T::from_int(2) / &kp2));
            let omega_sq = omega_sq.clone() / &factor.square();
            Ok(Transport {
                factor,
                omega_sq,
                lambda: T::one(),
            })
        }
        ScalingForm::UnitFrequency => {
            if !omega_sq.gt_zero() {
                return Err(Error::InvalidInput("ω² must be positive".into()));
            }
            let omega = omega_sq.sqrt();
            let lambda = lambda.clone() * &omega.powf(&(-kp2 / T::from_int(2)));
            Ok(Transport {
                factor: omega,
                omega_sq: T::one(),
                lambda,
            })
        }
    }
}

/// Maps an energy of the scaled problem back to `(ω², λ)`.
pub fn scaling_transport<T: Real>(energy: &T, omega_sq: &T, lambda: &T, k: Power, form: ScalingForm) -> Result<T> {
    Ok(scaling_relation(omega_sq, lambda, k, form)?.factor * energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_coupling_is_identity() {
        let t = scaling_relation(&-3.0, &1.0, Power::int(6), ScalingForm::UnitCoupling).unwrap();
        assert_eq!(t, Transport { factor: 1.0, omega_sq: -3.0, lambda: 1.0 });
    }

    #[test]
    fn exponents() {
        let t = scaling_relation(&-2.0, &16.0, Power::int(6), ScalingForm::UnitCoupling).unwrap();
        assert!((t.factor - 2.0).abs() < 1e-14);
        assert!((t.omega_sq + 0.5).abs() < 1e-14);
        let t = scaling_relation(&4.0, &3.0, Power::int(-6), ScalingForm::UnitFrequency).unwrap();
        assert!((t.factor - 2.0).abs() < 1e-14);
        assert!((t.lambda - 12.0).abs() < 1e-12);
        assert!(scaling_relation(&1.0, &1.0, Power::int(-2), ScalingForm::UnitCoupling).is_err());
        assert!(scaling_relation(&-1.0, &1.0, Power::int(4), ScalingForm::UnitFrequency).is_err());
    }
}
