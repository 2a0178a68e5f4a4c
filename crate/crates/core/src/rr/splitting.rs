use crate::basis::potential::{Parity, Potential};
use crate::error::{Error, Result};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;
use crate::trace::Strategy;

use super::solve;

/// Tunnelling splitting of the symmetric double well.
#[derive(Clone, Debug)]
pub struct Splitting<T> {
    pub delta: T,
    pub even_ground: T,
    pub odd_ground: T,
    /// Trace-optimal frequency of each parity sector.
    pub omega_even: T,
    pub omega_odd: T,
    /// States per parity sector.
    pub size: usize,
}

/// `E₁ - E₀` for `H = -(g/2) d²/dx² + (x² - 1/4)²/(2g)`.
///
/// Each parity sector is diagonalised in its own `size`-state oscillator
/// basis, with Ω fixed by the trace over that sector.
pub fn level_splitting<T: Real>(g: &T, size: usize, precision: &PrecisionConfig) -> Result<Splitting<T>> {
    let _guard = precision.activate::<T>();
    if !g.gt_zero() {
        return Err(Error::InvalidInput("g must be positive".into()));
    }
    if size == 0 {
        return Err(Error::InvalidInput("basis size must be positive".into()));
    }
    let sector = |parity: Parity| -> Result<(T, T)> {
        let pot = Potential::double_well(g.clone(), parity)?;
        let r = solve(&pot, &Strategy::TraceOmega { gamma: None }, size, precision)?;
        Ok((r.energies[0].clone(), r.params.omega))
    };
    let (even_ground, omega_even) = sector(Parity::Even)?;
    let (odd_ground, omega_odd) = sector(Parity::Odd)?;
    let delta = odd_ground.clone() - &even_ground;
    let resolution = T::epsilon() * &even_ground.abs().max_of(T::one()) * T::from_len(16 * size);
    if delta.lt_zero() && delta.abs() > resolution {
        return Err(Error::Unresolved(format!(
            "ΔE = {} is negative: the basis is too small to resolve the gap",
            delta.to_decimal(6)
        )));
    }
    if delta <= resolution {
        return Err(Error::Unresolved(format!(
            "ΔE = {} is below the working resolution {}",
            delta.to_decimal(6),
            resolution.to_decimal(3)
        )));
    }
    Ok(Splitting {
        delta,
        even_ground,
        odd_ground,
        omega_even,
        omega_odd,
        size,
    })
}
