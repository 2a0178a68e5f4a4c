use crate::basis::potential::{Potential, Power};
use crate::error::{Error, Result};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;
use crate::trace::{OptimizedParams, Strategy};

use super::{moments, solve, MomentTable};

/// Source of reference values for the error columns.
#[derive(Clone, Debug)]
pub enum Reference<T> {
    None,
    /// Energies (and optionally moments) aligned with [`SweepOptions::states`]
    /// and [`SweepOptions::powers`].
    Exact { energies: Vec<T>, moments: Option<Vec<Vec<T>>> },
    /// A solve at `2·max(N) + 20` with doubled digits.
    SelfRun,
}

#[derive(Clone, Debug)]
pub struct SweepOptions<T> {
    pub states: Vec<usize>,
    /// Moment powers recorded per row; may be empty.
    pub powers: Vec<Power>,
    pub reference: Reference<T>,
}

impl<T> SweepOptions<T> {
    pub fn ground_state(reference: Reference<T>) -> Self {
        SweepOptions {
            states: vec![0],
            powers: Vec::new(),
            reference,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow<T> {
    pub size: usize,
    pub params: OptimizedParams<T>,
    /// `None` where the state does not exist at this order.
    pub energies: Vec<Option<T>>,
    pub errors: Vec<Option<T>>,
    /// Outside the trusted lower half of the spectrum.
    pub untrusted: Vec<bool>,
    pub moments: Option<MomentTable<T>>,
    pub moment_errors: Option<Vec<Vec<T>>>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport<T> {
    pub states: Vec<usize>,
    pub powers: Vec<Power>,
    pub rows: Vec<SweepRow<T>>,
    pub reference_energies: Option<Vec<T>>,
    pub reference_moments: Option<Vec<Vec<T>>>,
    /// Basis size of the self-run reference, if one was made.
    pub reference_size: Option<usize>,
}

impl<T: Real> ConvergenceReport<T> {
    /// Error series of one state across the sweep.
    pub fn error_series(&self, state: usize) -> Vec<(usize, T)> {
        let Some(i) = self.states.iter().position(|s| *s == state) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| r.errors[i].clone().map(|e| (r.size, e)))
            .collect()
    }
}

/// `|E - E_ref| / |E_ref|`, or the absolute error when `E_ref = 0`.
pub fn relative_error<T: Real>(value: &T, reference: &T) -> T {
    let diff = (value.clone() - reference).abs();
    if reference.is_zero() {
        diff
    } else {
        diff / &reference.abs()
    }
}

pub fn sweep<T: Real>(
    potential: &Potential<T>,
    strategy: &Strategy<T>,
    sizes: &[usize],
    options: &SweepOptions<T>,
    precision: &PrecisionConfig,
) -> Result<ConvergenceReport<T>> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("basis sizes must be strictly ascending".into()));
    }
    let max_state = options.states.iter().copied().max().unwrap_or(0);
    let (reference_energies, reference_moments, reference_size) = match &options.reference {
        Reference::None => (None, None, None),
        Reference::Exact { energies, moments } => {
            if energies.len() != options.states.len() {
                return Err(Error::InvalidInput("one reference energy per state is required".into()));
            }
            (Some(energies.clone()), moments.clone(), None)
        }
        Reference::SelfRun => {
            let n_ref = 2 * sizes[sizes.len() - 1] + 20;
            let fine = precision.scaled(2);
            let r = solve(potential, strategy, n_ref.max(max_state + 1), &fine)?;
            let energies = options.states.iter().map(|s| r.energies[*s].clone()).collect();
            let m = if options.powers.is_empty() {
                None
            } else {
                Some(moments(&r, &options.powers, &options.states)?.values)
            };
            (Some(energies), m, Some(r.size))
        }
    };

    let _guard = precision.activate::<T>();
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let r = solve(potential, strategy, n, precision)?;
        let present: Vec<usize> = options.states.iter().copied().filter(|s| *s < n).collect();
        let energies: Vec<Option<T>> = options.states.iter().map(|s| r.energies.get(*s).cloned()).collect();
        let errors = energies
            .iter()
            .enumerate()
            .map(|(i, e)| match (e, &reference_energies) {
                (Some(e), Some(re)) => Some(relative_error(e, &re[i])),
                _ => None,
            })
            .collect();
        let untrusted = options.states.iter().map(|s| *s < n && !r.trusted(*s)).collect();
        let (row_moments, moment_errors) = if options.powers.is_empty() || present.is_empty() {
            (None, None)
        } else {
            let m = moments(&r, &options.powers, &present)?;
            let errs = reference_moments.as_ref().map(|rm| {
                m.states
                    .iter()
                    .zip(&m.values)
                    .map(|(s, vals)| {
                        let i = options.states.iter().position(|x| x == s).expect("state listed");
                        vals.iter().zip(&rm[i]).map(|(v, r)| relative_error(v, r)).collect()
                    })
                    .collect()
            });
            (Some(m), errs)
        };
        rows.push(SweepRow {
            size: n,
            params: r.params,
            energies,
            errors,
            untrusted,
            moments: row_moments,
            moment_errors,
        });
    }
    Ok(ConvergenceReport {
        states: options.states.clone(),
        powers: options.powers.clone(),
        rows,
        reference_energies,
        reference_moments,
        reference_size,
    })
}
