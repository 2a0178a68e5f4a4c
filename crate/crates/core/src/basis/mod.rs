//! Potentials, basis descriptions, operator matrices and Hamiltonian assembly.

pub mod assemble;
pub mod ho;
pub mod pho;
pub mod potential;

pub use assemble::{assemble, assemble_1d, assemble_radial, centrifugal_mismatch};
pub use ho::{ho_kinetic_matrix, ho_power_diagonal, ho_power_matrix};
pub use pho::{pho_power_diagonal, pho_power_matrix};
pub use potential::{Parity, Potential, PotentialKind, Power, Term};

use crate::error::{Error, Result};
use crate::numerics::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum BasisFamily<T> {
    /// One-dimensional oscillator eigenfunctions restricted to a sector.
    Oscillator { parity: Parity },
    /// Radial pseudoharmonic functions with index γ.
    PseudoHarmonic { gamma: T },
}

/// Truncated basis: family, size and frequency Ω.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSpec<T> {
    pub family: BasisFamily<T>,
    pub size: usize,
    pub omega: T,
}

impl<T: Real> BasisSpec<T> {
    pub fn oscillator(parity: Parity, size: usize, omega: T) -> Self {
        BasisSpec {
            family: BasisFamily::Oscillator { parity },
            size,
            omega,
        }
    }

    pub fn pseudo_harmonic(size: usize, omega: T, gamma: T) -> Self {
        BasisSpec {
            family: BasisFamily::PseudoHarmonic { gamma },
            size,
            omega,
        }
    }

    pub fn gamma(&self) -> Option<&T> {
        match &self.family {
            BasisFamily::PseudoHarmonic { gamma } => Some(gamma),
            BasisFamily::Oscillator { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidInput("basis size must be positive".into()));
        }
        if !self.omega.is_finite() || !self.omega.gt_zero() {
            return Err(Error::Inadmissible(format!(
                "Ω = {} must be positive",
                self.omega.to_decimal(12)
            )));
        }
        if let Some(g) = self.gamma() {
            if !g.is_finite() || !g.gt_zero() {
                return Err(Error::Inadmissible(format!("γ = {} must be positive", g.to_decimal(12))));
            }
        }
        Ok(())
    }
}
