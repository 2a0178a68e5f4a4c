//! Double-exponential quadrature on the half line and the whole line.

use crate::error::{Error, Result};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadDomain {
    /// `(0, ∞)`, via `x = s·exp(π/2 sinh t)`.
    HalfLine,
    /// `(−∞, ∞)`, via `x = s·sinh(π/2 sinh t)`.
    Line,
}

#[derive(Clone, Debug)]
pub struct QuadResult<T> {
    pub value: T,
    /// Difference between the last two refinement levels.
    pub error: T,
    pub levels: usize,
}

const MAX_LEVELS: usize = 14;
const NEGLIGIBLE_RUN: usize = 4;

/// Integrates `f` over `domain` to the precision's convergence tolerance
/// (relative to the integral of `|f|`).
pub fn quadrature<T: Real, F>(f: F, domain: QuadDomain, precision: &PrecisionConfig) -> Result<QuadResult<T>>
where
    F: FnMut(&T) -> T,
{
    quadrature_scaled(f, domain, &T::one(), precision)
}

/// As [`quadrature`], with the substitution stretched by `scale` so that the
/// transformed nodes sit where the integrand lives.
pub fn quadrature_scaled<T: Real, F>(
    mut f: F,
    domain: QuadDomain,
    scale: &T,
    precision: &PrecisionConfig,
) -> Result<QuadResult<T>>
where
    F: FnMut(&T) -> T,
{
    let tol: T = precision.tolerance::<T>();
    let eps = T::epsilon();
    let half_pi = T::pi() / T::from_int(2);
    let t_max = if T::working_digits() <= 17 {
        T::ratio(65, 10)
    } else {
        T::from_int(12)
    };

    // weight * f at node t; None once the transformed node is unusable
    let mut node = |t: &T| -> Option<(T, T)> {
        let et = t.exp();
        let inv = T::one() / &et;
        let sinh_t = (et.clone() - &inv) / T::from_int(2);
        let cosh_t = (et + inv) / T::from_int(2);
        let u = half_pi.clone() * &sinh_t;
        let (x, dx) = match domain {
            QuadDomain::HalfLine => {
                let x = u.exp() * scale;
                let dx = half_pi.clone() * &cosh_t * &x;
                (x, dx)
            }
            QuadDomain::Line => {
                let eu = u.exp();
                let inv_u = T::one() / &eu;
                let x = (eu.clone() - &inv_u) / T::from_int(2) * scale;
                let dx = half_pi.clone() * &cosh_t * &((eu + inv_u) / T::from_int(2)) * scale;
                (x, dx)
            }
        };
        if !x.is_finite() || !dx.is_finite() || (domain == QuadDomain::HalfLine && !x.gt_zero()) {
            return None;
        }
        let fx = f(&x);
        let term = fx * &dx;
        term.is_finite().then(|| (term.clone(), term.abs()))
    };

    // nodes ±(base + j*stride)*unit, walking outward until the terms vanish
    let mut sweep = |base: i64, stride: i64, unit: &T, total: &mut T, l1: &mut T| {
        for dir in [1i64, -1] {
            let mut small = 0;
            let mut j: i64 = if base == 0 && dir == -1 { 1 } else { 0 };
            loop {
                let t = T::from_int(dir * (base + j * stride)) * unit;
                if t.abs() > t_max {
                    break;
                }
                match node(&t) {
                    Some((term, mag)) => {
                        let floor = eps.clone() * &l1.clone().max_of(T::epsilon());
                        *total += &term;
                        *l1 += &mag;
                        if mag <= floor {
                            small += 1;
                            if small >= NEGLIGIBLE_RUN {
                                break;
                            }
                        } else {
                            small = 0;
                        }
                    }
                    None => break,
                }
                j += 1;
            }
        }
    };

    let mut h = T::ratio(1, 2);
    let mut raw = T::zero();
    let mut l1 = T::zero();
    sweep(0, 1, &h, &mut raw, &mut l1);
    let mut estimate = raw.clone() * &h;
    let mut last_err = estimate.abs();
    for level in 1..=MAX_LEVELS {
        let half = h.clone() / T::from_int(2);
        // new nodes are the odd multiples of the halved step
        let mut add = T::zero();
        let mut add_l1 = T::zero();
        sweep(1, 2, &half, &mut add, &mut add_l1);
        raw += &add;
        l1 += &add_l1;
        h = half;
        let next = raw.clone() * &h;
        let err = (next.clone() - &estimate).abs();
        estimate = next;
        last_err = err.clone();
        let norm = l1.clone() * &h;
        if level >= 3 && err <= tol.clone() * &norm {
            return Ok(QuadResult {
                value: estimate,
                error: err,
                levels: level,
            });
        }
    }
    Err(Error::Quadrature {
        estimate: estimate.lossy_f64(),
        error: last_err.lossy_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};
    use crate::BigFloat;

    #[test]
    fn gaussian_second_moment() {
        let p = PrecisionConfig::new(30).unwrap();
        let _g = p.activate::<BigFloat>();
        let r = quadrature(
            |x: &BigFloat| x.square() * (-x.square()).exp() / BigFloat::pi().sqrt(),
            QuadDomain::Line,
            &p,
        )
        .unwrap();
        let err = (r.value - BigFloat::ratio(1, 2)).abs();
        assert!(err < BigFloat::from_int(10).powi(-23), "{err}");
    }

    #[test]
    fn gamma_ratio_integral() {
        let p = PrecisionConfig::new(30).unwrap();
        let _g = p.activate::<BigFloat>();
        // 2 r^{2γ+1} e^{-r²} / Γ(γ) integrates to γ
        let gamma = BigFloat::from_int(2);
        let norm = gamma.gamma();
        let r = quadrature(
            |r: &BigFloat| BigFloat::from_int(2) * r.powf(&(gamma.clone() * BigFloat::from_int(2) + BigFloat::one())) * (-r.square()).exp() / &norm,
            QuadDomain::HalfLine,
            &p,
        )
        .unwrap();
        assert!((r.value - &gamma).abs() < BigFloat::from_int(10).powi(-23));
    }

    #[test]
    fn f64_path_and_endpoint_singularity() {
        let p = PrecisionConfig::new(15).unwrap();
        // ∫ e^{-x}/√x = √π, singular at the origin
        let r = quadrature(|x: &f64| (-x).exp() / x.sqrt(), QuadDomain::HalfLine, &p).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn divergent_integral_reports_estimate() {
        let p = PrecisionConfig::new(15).unwrap();
        let r = quadrature(|x: &f64| 1.0 / x, QuadDomain::HalfLine, &p);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
