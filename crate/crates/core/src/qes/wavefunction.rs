use crate::basis::potential::{Potential, Power};
use crate::error::{Error, Result};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::quadrature::{quadrature_scaled, QuadDomain};
use crate::numerics::scalar::Real;
use crate::rr::MomentTable;

use super::{series_coefficients, Couplings, QesFamily, QesLevel};

/// Sum of monomials `Σ c_j r^{e_j}`.
#[derive(Clone, Debug, PartialEq)]
struct Monomials<T>(Vec<(T, T)>);

impl<T: Real> Monomials<T> {
    fn eval(&self, r: &T) -> T {
        self.0.iter().map(|(c, e)| c.clone() * &r.powf(e)).sum()
    }

    fn derivative(&self) -> Self {
        Monomials(
            self.0
                .iter()
                .filter(|(_, e)| !e.is_zero())
                .map(|(c, e)| (c.clone() * e, e.clone() - T::one()))
                .collect(),
        )
    }

    fn lowest_power(&self) -> T {
        self.0
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, e)| e.clone())
            .fold(None, |m: Option<T>, e| Some(m.map_or(e.clone(), |m| m.min_of(e))))
            .unwrap_or_else(T::zero)
    }
}

/// Closed-form state `ψ(r) = N e^{φ(r)} Q(r)` on the positive half-line;
/// one-dimensional states are reconstructed by parity.
#[derive(Clone, Debug)]
pub struct ExactState<T> {
    pub family: QesFamily<T>,
    pub level: QesLevel<T>,
    /// Series coefficients `a_0 = 1, …, a_p`.
    pub coefficients: Vec<T>,
    /// `|a_{p+1}| / max |a_n|` from continuing the recurrence.
    pub termination: T,
    /// Factor that normalises `e^φ Q`.
    pub norm: T,
    potential: Potential<T>,
    exponent: Monomials<T>,
    series: Monomials<T>,
    /// 2 for one-dimensional states integrated over half the line.
    weight: T,
    length: T,
}

const TERMINATION_TOL: f64 = 1e-10;

impl<T: Real> ExactState<T> {
    pub fn potential(&self) -> &Potential<T> {
        &self.potential
    }

    pub fn couplings(&self) -> &Couplings<T> {
        &self.level.couplings
    }

    /// Normalised wave function at `r > 0`.
    pub fn value(&self, r: &T) -> T {
        let e = self.exponent.eval(r).exp();
        if e.is_zero() {
            return T::zero();
        }
        self.norm.clone() * &e * &self.series.eval(r)
    }

    /// `(ψ, ψ', ψ'')` of the unnormalised state.
    fn derivatives(&self, r: &T) -> (T, T, T) {
        let e = self.exponent.eval(r).exp();
        if e.is_zero() {
            return (T::zero(), T::zero(), T::zero());
        }
        let d1 = self.exponent.derivative();
        let d2 = d1.derivative();
        let q1 = self.series.derivative();
        let q2 = q1.derivative();
        let (p1, p2) = (d1.eval(r), d2.eval(r));
        let (q, dq, ddq) = (self.series.eval(r), q1.eval(r), q2.eval(r));
        let psi = e.clone() * &q;
        let dpsi = e.clone() * &(p1.clone() * &q + &dq);
        let ddpsi = e * &((p2 + &p1.square()) * &q + T::from_int(2) * &p1 * &dq + &ddq);
        (psi, dpsi, ddpsi)
    }

    fn integrate<F: FnMut(&T) -> T>(&self, f: F, precision: &PrecisionConfig) -> Result<T> {
        let q = quadrature_scaled(f, QuadDomain::HalfLine, &self.length, precision)?;
        Ok(q.value * &self.weight)
    }
}

/// Builds and normalises the closed-form state of one exact level.
pub fn exact_wavefunction<T: Real>(
    family: &QesFamily<T>,
    level: &QesLevel<T>,
    precision: &PrecisionConfig,
) -> Result<ExactState<T>> {
    let _guard = precision.activate::<T>();
    let c = &level.couplings;
    let (coefficients, tail) = series_coefficients(family, c, &level.energy)?;
    let biggest = coefficients.iter().fold(T::zero(), |m, a| m.max_of(a.abs()));
    let termination = tail.abs() / &biggest;
    if termination > T::from_f64(TERMINATION_TOL).expect("constant") {
        return Err(Error::QesViolation(format!(
            "series does not terminate: |a_(p+1)| / max|a_n| = {}",
            termination.to_decimal(6)
        )));
    }
    let two = T::from_int(2);
    let half = T::ratio(1, 2);
    let beta = || (two.clone() * &c.lambda).sqrt() / T::from_int(4);
    let shifted = |offset: T, stride: i64| -> Monomials<T> {
        Monomials(
            coefficients
                .iter()
                .enumerate()
                .map(|(n, a)| (a.clone(), offset.clone() + T::from_int(stride * n as i64)))
                .collect(),
        )
    };
    let (exponent, series, weight, length) = match family {
        QesFamily::Sextic1D { nu, .. } => (
            Monomials(vec![(-beta(), T::from_int(4))]),
            shifted(T::from_int(i64::from(*nu)), 2),
            two.clone(),
            beta().powf(&-T::ratio(1, 4)),
        ),
        QesFamily::SexticRadial { l, .. } => (
            Monomials(vec![(-beta(), T::from_int(4))]),
            shifted(T::from_int(i64::from(*l) + 1), 2),
            T::one(),
            beta().powf(&-T::ratio(1, 4)),
        ),
        QesFamily::Harmonium { l, .. } => (
            Monomials(vec![(-c.omega() * &half, two.clone())]),
            shifted(T::from_int(i64::from(*l) + 1), 1),
            T::one(),
            T::one() / &c.omega().sqrt(),
        ),
        QesFamily::Spiked { .. } => {
            let sigma = (two.clone() * &c.lambda).sqrt();
            (
                Monomials(vec![(-sigma * &half, -two.clone()), (-c.omega() * &half, two.clone())]),
                shifted(T::ratio(3, 2), 2),
                T::one(),
                T::one() / &c.omega().sqrt(),
            )
        }
    };
    let mut state = ExactState {
        family: family.clone(),
        level: level.clone(),
        coefficients,
        termination,
        norm: T::one(),
        potential: family.potential(c)?,
        exponent,
        series,
        weight,
        length,
    };
    let norm_sq = state.integrate(|r| state.value(r).square(), precision)?;
    state.norm = T::one() / &norm_sq.sqrt();
    Ok(state)
}

/// `⟨r^k⟩` of an exact state by quadrature.
pub fn exact_moments<T: Real>(state: &ExactState<T>, powers: &[Power], precision: &PrecisionConfig) -> Result<MomentTable<T>> {
    let _guard = precision.activate::<T>();
    let singular = !matches!(state.family, QesFamily::Spiked { .. });
    let lowest = state.series.lowest_power();
    let mut values = Vec::with_capacity(powers.len());
    for k in powers {
        if singular && !(T::from_int(2) * &lowest + &k.value::<T>() > -T::one()) {
            return Err(Error::InvalidInput(format!("moment r^{k} diverges at the origin")));
        }
        let odd_in_1d = matches!(state.family, QesFamily::Sextic1D { .. })
            && k.as_integer().is_some_and(|k| k % 2 != 0);
        if odd_in_1d {
            values.push(T::zero());
            continue;
        }
        let kv = k.value::<T>();
        values.push(state.integrate(|r| state.value(r).square() * &r.powf(&kv), precision)?);
    }
    Ok(MomentTable {
        powers: powers.to_vec(),
        states: vec![state.family.level_number(state.level.state_index)],
        values: vec![values],
    })
}

/// `‖(H - E)ψ‖ / ‖ψ‖` for the state's closed form and a trial energy.
pub fn residual_check<T: Real>(state: &ExactState<T>, energy: &T, precision: &PrecisionConfig) -> Result<T> {
    let _guard = precision.activate::<T>();
    let pot = &state.potential;
    let s = pot.kinetic_scale.clone();
    let l = T::from_int(i64::from(pot.angular_momentum().unwrap_or(0)));
    let centrifugal = l.clone() * &(l + T::one()) / T::from_int(2);
    let half = T::ratio(1, 2);
    let terms: Vec<(T, T)> = pot.terms.iter().map(|t| (t.coeff.clone(), t.power.value::<T>())).collect();
    let residual = |r: &T| {
        let (psi, _, ddpsi) = state.derivatives(r);
        if psi.is_zero() && ddpsi.is_zero() {
            return T::zero();
        }
        let v: T = terms.iter().map(|(c, k)| c.clone() * &r.powf(k)).sum();
        let kinetic = s.clone() * &(-half.clone() * &ddpsi + centrifugal.clone() / &r.square() * &psi);
        (kinetic + v * &psi - energy.clone() * &psi) * &state.norm
    };
    // the residual of an exact state sits at the roundoff floor, where the
    // quadrature cannot converge relatively; its error estimate then bounds it
    let num = match state.integrate(|r| residual(r).square(), precision) {
        Ok(v) => v,
        Err(Error::Quadrature { estimate, error }) => {
            T::from_f64(estimate.abs().max(error)).unwrap_or_else(T::zero) * &state.weight
        }
        Err(e) => return Err(e),
    };
    let den = state.integrate(|r| state.value(r).square(), precision)?;
    Ok((num / den).sqrt())
}
