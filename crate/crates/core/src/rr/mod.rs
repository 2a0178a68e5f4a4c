//! The optimized Rayleigh-Ritz pipeline: fix the nonlinear parameters by the
//! trace condition, assemble, diagonalise and post-process.

mod scaling;
mod splitting;
mod sweep;

pub use scaling::{scaling_relation, scaling_transport, ScalingForm, Transport};
pub use splitting::{level_splitting, Splitting};
pub use sweep::{relative_error, sweep, ConvergenceReport, Reference, SweepOptions, SweepRow};

use crate::basis::potential::{Potential, PotentialKind, Power};
use crate::basis::{assemble, ho_power_matrix, pho_power_matrix, BasisFamily, BasisSpec};
use crate::error::{Error, Result};
use crate::numerics::linalg::{eigh, SymMatrix};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;
use crate::trace::{OptimizedParams, Strategy, TraceObjective};

#[derive(Clone, Debug)]
pub struct SpectralResult<T> {
    pub params: OptimizedParams<T>,
    pub basis: BasisSpec<T>,
    /// Ascending Ritz values.
    pub energies: Vec<T>,
    /// `eigenvectors[i]` holds the basis coefficients of state `i`.
    pub eigenvectors: Vec<Vec<T>>,
    pub size: usize,
    pub precision: PrecisionConfig,
    pub potential: Potential<T>,
}

/// Number of low states considered converged candidates at order `size`.
pub fn trust_window(size: usize) -> usize {
    size.div_ceil(2)
}

impl<T: Real> SpectralResult<T> {
    pub fn trusted(&self, state: usize) -> bool {
        state < trust_window(self.size)
    }

    pub fn energy(&self, state: usize) -> Result<&T> {
        self.energies
            .get(state)
            .ok_or_else(|| Error::InvalidInput(format!("state {state} outside a basis of size {}", self.size)))
    }

    pub fn energy_sum(&self) -> T {
        self.energies.iter().cloned().sum()
    }
}

/// Optimises the parameters for `strategy`, then diagonalises.
pub fn solve<T: Real>(
    potential: &Potential<T>,
    strategy: &Strategy<T>,
    size: usize,
    precision: &PrecisionConfig,
) -> Result<SpectralResult<T>> {
    let _guard = precision.activate::<T>();
    let potential = potential.promote();
    let objective = TraceObjective::new(potential.clone(), size, strategy.promote())?;
    let params = objective.optimize(precision)?;
    let basis = params.basis(&potential, size);
    diagonalize(&potential, params, basis, precision)
}

/// Diagonalises in a given basis; the trace is recorded as a fixed strategy.
pub fn solve_in_basis<T: Real>(
    potential: &Potential<T>,
    basis: &BasisSpec<T>,
    precision: &PrecisionConfig,
) -> Result<SpectralResult<T>> {
    let _guard = precision.activate::<T>();
    basis.validate()?;
    let potential = potential.promote();
    let basis = BasisSpec {
        family: match &basis.family {
            BasisFamily::PseudoHarmonic { gamma } => BasisFamily::PseudoHarmonic { gamma: gamma.promote() },
            family => family.clone(),
        },
        size: basis.size,
        omega: basis.omega.promote(),
    };
    let strategy = Strategy::Fixed {
        omega: basis.omega.clone(),
        gamma: basis.gamma().cloned(),
    };
    let params = TraceObjective::new(potential.clone(), basis.size, strategy)?.optimize(precision)?;
    diagonalize(&potential, params, basis, precision)
}

fn diagonalize<T: Real>(
    potential: &Potential<T>,
    params: OptimizedParams<T>,
    basis: BasisSpec<T>,
    precision: &PrecisionConfig,
) -> Result<SpectralResult<T>> {
    let h = assemble(potential, &basis, precision)?;
    let eig = eigh(&h, precision)?;
    Ok(SpectralResult {
        params,
        size: basis.size,
        basis,
        energies: eig.values,
        eigenvectors: eig.vectors,
        precision: precision.clone(),
        potential: potential.clone(),
    })
}

/// Expectation values `⟪n|x^k|n⟫` (or `r^k`) of Ritz states.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T> {
    pub powers: Vec<Power>,
    pub states: Vec<usize>,
    /// `values[i][j]` is the moment of `powers[j]` in `states[i]`.
    pub values: Vec<Vec<T>>,
}

impl<T: Real> MomentTable<T> {
    pub fn get(&self, state: usize, power: Power) -> Option<&T> {
        let i = self.states.iter().position(|s| *s == state)?;
        let j = self.powers.iter().position(|p| *p == power)?;
        Some(&self.values[i][j])
    }
}

/// Matrix of the coordinate power in the result's basis, in physical units.
fn coordinate_matrix<T: Real>(result: &SpectralResult<T>, k: Power) -> Result<SymMatrix<T>> {
    let n = result.size;
    let unit = result.basis.omega.powf(&(-k.half::<T>()));
    let m = match result.potential.kind {
        PotentialKind::OneDim { parity } => {
            let k = k
                .as_integer()
                .filter(|k| *k >= 0)
                .ok_or_else(|| Error::InvalidInput(format!("x^{k} needs a nonnegative integer power")))?;
            ho_power_matrix::<T>(n, k as u32, parity)
        }
        PotentialKind::Radial { .. } => {
            let gamma = result
                .basis
                .gamma()
                .ok_or_else(|| Error::InvalidInput("radial result without γ".into()))?;
            pho_power_matrix::<T>(n, k, gamma)?
        }
    };
    Ok(m.map(|x| x.clone() * &unit))
}

pub fn moments<T: Real>(result: &SpectralResult<T>, powers: &[Power], states: &[usize]) -> Result<MomentTable<T>> {
    let _guard = result.precision.activate::<T>();
    for s in states {
        result.energy(*s)?;
    }
    let mut values = vec![Vec::with_capacity(powers.len()); states.len()];
    for k in powers {
        let m = coordinate_matrix(result, *k)?;
        for (row, s) in values.iter_mut().zip(states) {
            row.push(m.quadratic_form(&result.eigenvectors[*s]));
        }
    }
    Ok(MomentTable {
        powers: powers.to_vec(),
        states: states.to_vec(),
        values,
    })
}

/// Relative violation of the virial identity `2⟨T⟩ = Σ k c_k ⟨r^k⟩` for a
/// state, with `⟨T⟩ = E - Σ c_k ⟨r^k⟩`.
pub fn virial_defect<T: Real>(result: &SpectralResult<T>, state: usize) -> Result<T> {
    let terms: Vec<_> = result.potential.terms.iter().filter(|t| !t.coeff.is_zero()).collect();
    let powers: Vec<Power> = terms.iter().map(|t| t.power).collect();
    let table = moments(result, &powers, &[state])?;
    let _guard = result.precision.activate::<T>();
    let mut potential = T::zero();
    let mut weighted = T::zero();
    for (t, m) in terms.iter().zip(&table.values[0]) {
        let v = t.coeff.clone() * m;
        weighted += t.power.value::<T>() * &v;
        potential += v;
    }
    let kinetic2 = (result.energy(state)?.clone() - &potential) * T::from_int(2);
    let scale = kinetic2.abs().max_of(weighted.abs()).max_of(T::epsilon());
    Ok((kinetic2 - &weighted).abs() / &scale)
}
