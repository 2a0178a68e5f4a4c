//! Nonlinear basis parameters fixed by minimising the trace of the truncated
//! Hamiltonian.

use crate::basis::assemble::centrifugal_mismatch;
use crate::basis::ho::{ho_power_diagonal, kinetic_diagonal};
use crate::basis::pho::pho_power_diagonal;
use crate::basis::potential::{Parity, Potential, PotentialKind, Power};
use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::numerics::minimize::{minimize_2d, minimize_scalar, Axis, Domain};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;

/// Distance kept above the γ bound of the basis.
pub const GAMMA_OFFSET: f64 = 1e-6;

/// Which nonlinear parameters are optimised and the values of the others.
/// A `None` γ means the radial-oscillator value `l + 3/2`.
#[derive(Clone, Debug, PartialEq)]
pub enum Strategy<T> {
    Fixed { omega: T, gamma: Option<T> },
    TraceOmega { gamma: Option<T> },
    TraceGamma { omega: T },
    TraceJoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyTag {
    Fixed,
    TraceOmega,
    TraceGamma,
    TraceJoint,
}

impl StrategyTag {
    pub fn name(self) -> &'static str {
        match self {
            StrategyTag::Fixed => "fixed",
            StrategyTag::TraceOmega => "trace-omega",
            StrategyTag::TraceGamma => "trace-gamma",
            StrategyTag::TraceJoint => "trace-joint",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed" => Some(StrategyTag::Fixed),
            "trace-omega" => Some(StrategyTag::TraceOmega),
            "trace-gamma" => Some(StrategyTag::TraceGamma),
            "trace-joint" => Some(StrategyTag::TraceJoint),
            _ => None,
        }
    }
}

impl<T> Strategy<T> {
    pub fn tag(&self) -> StrategyTag {
        match self {
            Strategy::Fixed { .. } => StrategyTag::Fixed,
            Strategy::TraceOmega { .. } => StrategyTag::TraceOmega,
            Strategy::TraceGamma { .. } => StrategyTag::TraceGamma,
            Strategy::TraceJoint => StrategyTag::TraceJoint,
        }
    }
}

impl<T: Real> Strategy<T> {
    /// Copy with every parameter rounded to the current working precision.
    pub fn promote(&self) -> Self {
        match self {
            Strategy::Fixed { omega, gamma } => Strategy::Fixed {
                omega: omega.promote(),
                gamma: gamma.as_ref().map(Real::promote),
            },
            Strategy::TraceOmega { gamma } => Strategy::TraceOmega {
                gamma: gamma.as_ref().map(Real::promote),
            },
            Strategy::TraceGamma { omega } => Strategy::TraceGamma { omega: omega.promote() },
            Strategy::TraceJoint => Strategy::TraceJoint,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizedParams<T> {
    pub omega: T,
    /// γ for radial problems.
    pub gamma: Option<T>,
    pub trace: T,
    pub strategy: StrategyTag,
    /// The minimum sits on the edge of the admissible box.
    pub boundary_pinned: bool,
    pub evaluations: usize,
}

impl<T: Real> OptimizedParams<T> {
    /// Basis described by these parameters for a given potential.
    pub fn basis(&self, potential: &Potential<T>, size: usize) -> BasisSpec<T> {
        match potential.kind {
            PotentialKind::OneDim { parity } => BasisSpec::oscillator(parity, size, self.omega.clone()),
            PotentialKind::Radial { l } => BasisSpec::pseudo_harmonic(
                size,
                self.omega.clone(),
                self.gamma.clone().unwrap_or_else(|| oscillator_gamma(l)),
            ),
        }
    }
}

/// `l + 3/2`, the index at which the pseudoharmonic basis is the radial
/// oscillator basis.
pub fn oscillator_gamma<T: Real>(l: u32) -> T {
    T::from_int(i64::from(l)) + T::ratio(3, 2)
}

/// `Tr_N H` as a function of the free parameters.
#[derive(Clone, Debug)]
pub struct TraceObjective<T> {
    pub potential: Potential<T>,
    pub size: usize,
    pub strategy: Strategy<T>,
}

/// Diagonal sums that do not depend on Ω.
enum Sums<T> {
    OneDim {
        kinetic: T,
        terms: Vec<(T, T, T)>,
    },
    Radial {
        linear: T,
        inv_sq: Option<T>,
        mismatch: T,
        terms: Vec<(T, T, T)>,
    },
}

impl<T: Real> TraceObjective<T> {
    pub fn new(potential: Potential<T>, size: usize, strategy: Strategy<T>) -> Result<Self> {
        potential.validate()?;
        if size == 0 {
            return Err(Error::InvalidInput("basis size must be positive".into()));
        }
        let one_dim = matches!(potential.kind, PotentialKind::OneDim { .. });
        let uses_gamma = match &strategy {
            Strategy::Fixed { gamma, .. } | Strategy::TraceOmega { gamma } => gamma.is_some(),
            Strategy::TraceGamma { .. } | Strategy::TraceJoint => true,
        };
        if one_dim && uses_gamma {
            return Err(Error::InvalidInput("γ is only defined for radial problems".into()));
        }
        Ok(TraceObjective {
            potential,
            size,
            strategy,
        })
    }

    fn l(&self) -> u32 {
        self.potential.angular_momentum().unwrap_or(0)
    }

    /// Smallest admissible γ.
    pub fn gamma_floor(&self) -> T {
        self.potential.gamma_lower_bound() + T::from_f64(GAMMA_OFFSET).unwrap_or_else(T::epsilon)
    }

    /// Frequency scale of the quadratic term, used for bracketing.
    fn natural_omega(&self) -> Option<T> {
        let w2 = self.potential.omega_squared();
        w2.gt_zero().then(|| w2.sqrt())
    }

    fn sums(&self, gamma: Option<&T>) -> Result<Sums<T>> {
        let n = self.size;
        match self.potential.kind {
            PotentialKind::OneDim { parity } => {
                let kinetic = (0..n).map(|j| kinetic_diagonal::<T>(parity.index(j))).sum();
                let mut terms = Vec::new();
                for t in &self.potential.terms {
                    if t.coeff.is_zero() {
                        continue;
                    }
                    let k = t.power.as_integer().filter(|k| *k >= 0).ok_or_else(|| {
                        Error::InvalidInput(format!("power {} is not a nonnegative integer", t.power))
                    })?;
                    let sum: T = ho_power_diagonal::<T>(n, k as u32, parity).into_iter().sum();
                    terms.push((t.coeff.clone(), -t.power.half::<T>(), sum));
                }
                Ok(Sums::OneDim { kinetic, terms })
            }
            PotentialKind::Radial { l } => {
                let gamma = gamma.cloned().unwrap_or_else(|| oscillator_gamma(l));
                if !gamma.is_finite() || !gamma.gt_zero() {
                    return Err(Error::Inadmissible(format!("γ = {} must be positive", gamma.to_decimal(12))));
                }
                let linear = T::from_len(n * n.saturating_sub(1)) + T::from_len(n) * &gamma;
                let mismatch = centrifugal_mismatch(&gamma, l);
                let has_inv = !mismatch.is_zero() || !self.potential.coefficient(Power::int(-2)).is_zero();
                let inv_sq = if has_inv {
                    Some(pho_power_diagonal::<T>(n, Power::int(-2), &gamma)?.into_iter().sum())
                } else {
                    None
                };
                let mut terms = Vec::new();
                for t in &self.potential.terms {
                    if t.coeff.is_zero() || t.power == Power::int(2) || t.power == Power::int(-2) {
                        continue;
                    }
                    let sum: T = pho_power_diagonal::<T>(n, t.power, &gamma)?.into_iter().sum();
                    terms.push((t.coeff.clone(), -t.power.half::<T>(), sum));
                }
                Ok(Sums::Radial {
                    linear,
                    inv_sq,
                    mismatch,
                    terms,
                })
            }
        }
    }

    fn evaluate(&self, sums: &Sums<T>, omega: &T) -> Result<T> {
        if !omega.is_finite() || !omega.gt_zero() {
            return Err(Error::Inadmissible(format!("Ω = {} must be positive", omega.to_decimal(12))));
        }
        let s = &self.potential.kinetic_scale;
        let power_terms = |terms: &[(T, T, T)]| -> T {
            terms
                .iter()
                .map(|(c, e, sum)| c.clone() * &omega.powf(e) * sum)
                .sum()
        };
        let value = match sums {
            Sums::OneDim { kinetic, terms } => s.clone() * omega * kinetic + power_terms(terms),
            Sums::Radial {
                linear,
                inv_sq,
                mismatch,
                terms,
            } => {
                let two = T::from_int(2);
                let c2 = self.potential.coefficient(Power::int(2));
                let mut v = s.clone() * omega * linear;
                v += (c2 - s.clone() * &omega.square() / &two) / omega * linear;
                if let Some(inv) = inv_sq {
                    let coeff = self.potential.coefficient(Power::int(-2)) * omega
                        - s.clone() * omega / &two * mismatch;
                    v += coeff * inv;
                }
                v + power_terms(terms)
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Inadmissible("trace is not finite".into()))
        }
    }

    /// `Σ_{n<N} H_nn` at the given parameters, from diagonal closed forms.
    pub fn value(&self, omega: &T, gamma: Option<&T>) -> Result<T> {
        let sums = self.sums(gamma)?;
        self.evaluate(&sums, omega)
    }

    fn omega_bracket(&self) -> (T, T) {
        match self.natural_omega() {
            Some(w) => (w.clone() / T::from_int(10), w.max_of(T::one()) * T::from_int(10)),
            None => (T::ratio(1, 10), T::from_int(10)),
        }
    }

    fn gamma_start(&self) -> T {
        let floor = self.gamma_floor();
        let g = oscillator_gamma::<T>(self.l());
        if g > floor {
            g
        } else {
            floor + T::one()
        }
    }

    /// Minimises the trace over the free parameters.
    pub fn optimize(&self, precision: &PrecisionConfig) -> Result<OptimizedParams<T>> {
        let ptol = precision.parameter_tolerance::<T>();
        let radial = matches!(self.potential.kind, PotentialKind::Radial { .. });
        let tag = self.strategy.tag();
        match &self.strategy {
            Strategy::Fixed { omega, gamma } => {
                let gamma = radial.then(|| gamma.clone().unwrap_or_else(|| oscillator_gamma(self.l())));
                let trace = self.value(omega, gamma.as_ref())?;
                Ok(OptimizedParams {
                    omega: omega.clone(),
                    gamma,
                    trace,
                    strategy: tag,
                    boundary_pinned: false,
                    evaluations: 1,
                })
            }
            Strategy::TraceOmega { gamma } => {
                let gamma = radial.then(|| gamma.clone().unwrap_or_else(|| oscillator_gamma(self.l())));
                let sums = self.sums(gamma.as_ref())?;
                let bracket = self.omega_bracket();
                let tol = ptol.clone() * &bracket.1.clone().max_of(T::one());
                let r = minimize_scalar(|w: &T| self.evaluate(&sums, w), bracket, &Domain::positive(), &tol)?;
                let tol = ptol * &r.argmin.clone().max_of(T::one());
                // second pass at a tolerance relative to the located minimum
                let near = (r.argmin.clone() * T::ratio(9, 10), r.argmin.clone() * T::ratio(11, 10));
                let r = minimize_scalar(|w: &T| self.evaluate(&sums, w), near, &Domain::positive(), &tol)?;
                Ok(OptimizedParams {
                    omega: r.argmin,
                    gamma,
                    trace: r.value,
                    strategy: tag,
                    boundary_pinned: r.pinned.is_some(),
                    evaluations: r.evaluations,
                })
            }
            Strategy::TraceGamma { omega } => {
                let floor = self.gamma_floor();
                let start = self.gamma_start();
                let domain = Domain::bounded_below(floor.clone());
                let tol = ptol * &start.clone().max_of(T::one());
                let bracket = (floor, start.clone() + T::from_int(10));
                let r = minimize_scalar(|g: &T| self.value(omega, Some(g)), bracket, &domain, &tol)?;
                Ok(OptimizedParams {
                    omega: omega.clone(),
                    gamma: Some(r.argmin),
                    trace: r.value,
                    strategy: tag,
                    boundary_pinned: r.pinned.is_some(),
                    evaluations: r.evaluations,
                })
            }
            Strategy::TraceJoint => {
                let floor = self.gamma_floor();
                let g0 = self.gamma_start();
                // start from the Ω optimum at the oscillator γ
                let sums = self.sums(Some(&g0))?;
                let w_tol = ptol.clone() * &self.omega_bracket().1;
                let w0 = minimize_scalar(|w: &T| self.evaluate(&sums, w), self.omega_bracket(), &Domain::positive(), &w_tol)?;
                let axes = [
                    Axis {
                        domain: Domain::positive(),
                        step: T::ratio(3, 2),
                        tol: ptol.clone() * &w0.argmin.clone().max_of(T::one()),
                    },
                    Axis {
                        domain: Domain::bounded_below(floor),
                        step: T::one(),
                        tol: ptol * &g0.clone().max_of(T::one()),
                    },
                ];
                let mut cache: Option<(T, Sums<T>)> = None;
                let r = minimize_2d(
                    |w: &T, g: &T| {
                        let fresh = !matches!(&cache, Some((cg, _)) if cg == g);
                        if fresh {
                            cache = Some((g.clone(), self.sums(Some(g))?));
                        }
                        let (_, sums) = cache.as_ref().expect("cache filled above");
                        self.evaluate(sums, w)
                    },
                    (w0.argmin, g0),
                    &axes,
                )?;
                Ok(OptimizedParams {
                    omega: r.argmin.0,
                    gamma: Some(r.argmin.1),
                    trace: r.value,
                    strategy: tag,
                    boundary_pinned: r.pinned,
                    evaluations: r.evaluations + w0.evaluations,
                })
            }
        }
    }
}

/// `Tr_N H` for a potential at explicit parameters.
pub fn trace_value<T: Real>(potential: &Potential<T>, size: usize, omega: &T, gamma: Option<&T>) -> Result<T> {
    let obj = TraceObjective {
        potential: potential.clone(),
        size,
        strategy: Strategy::TraceJoint,
    };
    obj.value(omega, gamma)
}

/// Problem classes with a recommended split into free and frozen parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemClass {
    /// One-dimensional oscillator: optimise Ω.
    Oscillator1D,
    /// Radial potential with only positive powers: γ = l + 3/2, optimise Ω.
    RadialPositive,
    /// Radial potential dominated by a power below −1 at the origin:
    /// Ω = ω, optimise γ.
    RadialSpiked,
    /// Harmonium-like: Ω = ω and γ = l + 3/2, nothing optimised.
    HarmoniumNaive,
    /// Optimise Ω and γ together.
    General,
}

impl ProblemClass {
    pub fn classify<T: Real>(potential: &Potential<T>) -> Self {
        match potential.kind {
            PotentialKind::OneDim { .. } => ProblemClass::Oscillator1D,
            PotentialKind::Radial { .. } => {
                let has_omega = potential.omega_squared().gt_zero();
                match potential.most_singular_power() {
                    None => ProblemClass::RadialPositive,
                    Some(k) if k < Power::int(-1) && has_omega => ProblemClass::RadialSpiked,
                    Some(_) => ProblemClass::General,
                }
            }
        }
    }
}

/// Strategy recommended for a problem class.
pub fn strategy_presets<T: Real>(class: ProblemClass, potential: &Potential<T>) -> Result<Strategy<T>> {
    let omega = || {
        let w2 = potential.omega_squared();
        if w2.gt_zero() {
            Ok(w2.sqrt())
        } else {
            Err(Error::InvalidInput(
                "this preset needs a confining quadratic term to fix Ω".into(),
            ))
        }
    };
    let radial = matches!(potential.kind, PotentialKind::Radial { .. });
    match class {
        ProblemClass::Oscillator1D | ProblemClass::RadialPositive => Ok(Strategy::TraceOmega { gamma: None }),
        ProblemClass::RadialSpiked if radial => Ok(Strategy::TraceGamma { omega: omega()? }),
        ProblemClass::HarmoniumNaive if radial => Ok(Strategy::Fixed {
            omega: omega()?,
            gamma: potential
                .angular_momentum()
                .map(|l| T::from_int(i64::from(l)) + T::ratio(3, 2)),
        }),
        ProblemClass::General if radial => Ok(Strategy::TraceJoint),
        _ => Err(Error::InvalidInput(format!("{class:?} preset needs a radial potential"))),
    }
}

/// Convenience: the preset objective for a potential's own class.
pub fn preset_objective<T: Real>(potential: &Potential<T>, size: usize) -> Result<TraceObjective<T>> {
    let class = ProblemClass::classify(potential);
    TraceObjective::new(potential.clone(), size, strategy_presets(class, potential)?)
}

/// Parity sector that carries the trace for a one-dimensional problem.
pub fn trace_sector<T: Real>(potential: &Potential<T>) -> Option<Parity> {
    potential.parity()
}
