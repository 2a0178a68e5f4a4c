//! Derivative-free minimisation: golden-section search with automatic
//! bracketing, and coordinate descent for two parameters.

use crate::error::{Error, Result};
use crate::numerics::scalar::Real;

/// How candidate points are spread when scanning a bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Geometric spacing; the domain must be strictly positive.
    Log,
}

/// Admissible region for one parameter. Bounds are inclusive limits that the
/// search may touch but never cross.
#[derive(Clone, Debug)]
pub struct Domain<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
    pub spacing: Spacing,
}

impl<T: Real> Domain<T> {
    pub fn positive() -> Self {
        Domain {
            lower: None,
            upper: None,
            spacing: Spacing::Log,
        }
    }

    pub fn bounded_below(lower: T) -> Self {
        Domain {
            lower: Some(lower),
            upper: None,
            spacing: Spacing::Linear,
        }
    }

    pub fn unbounded() -> Self {
        Domain {
            lower: None,
            upper: None,
            spacing: Spacing::Linear,
        }
    }

    fn clamp(&self, x: T) -> T {
        let mut x = x;
        if let Some(lo) = &self.lower {
            x = x.max_of(lo.clone());
        }
        if let Some(hi) = &self.upper {
            x = x.min_of(hi.clone());
        }
        x
    }

    fn at_lower(&self, x: &T) -> bool {
        self.lower.as_ref().is_some_and(|lo| x <= lo)
    }

    fn at_upper(&self, x: &T) -> bool {
        self.upper.as_ref().is_some_and(|hi| x >= hi)
    }
}

/// Which side of the domain a minimiser got stuck on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pinned {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub struct ScalarMin<T> {
    pub argmin: T,
    pub value: T,
    pub pinned: Option<Pinned>,
    pub evaluations: usize,
}

const SCAN_POINTS: usize = 24;
const MAX_EXPANSIONS: usize = 40;
const MAX_GOLDEN_ITERS: usize = 5000;

/// Golden-section search on `[a, b]` until the bracket is narrower than `tol`.
pub fn golden_section<T: Real, F>(mut f: F, a: T, b: T, tol: &T) -> Result<(T, T, usize)>
where
    F: FnMut(&T) -> Result<T>,
{
    let inv_phi = (T::from_int(5).sqrt() - T::one()) / T::from_int(2);
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b.clone() - &(inv_phi.clone() * &(b.clone() - &a));
    let mut d = a.clone() + &(inv_phi.clone() * &(b.clone() - &a));
    let mut fc = f(&c)?;
    let mut fd = f(&d)?;
    let mut evals = 2;
    for _ in 0..MAX_GOLDEN_ITERS {
        if (b.clone() - &a).abs() <= *tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b.clone() - &(inv_phi.clone() * &(b.clone() - &a));
            fc = f(&c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a.clone() + &(inv_phi.clone() * &(b.clone() - &a));
            fd = f(&d)?;
        }
        evals += 1;
    }
    Ok(if fc <= fd { (c, fc, evals) } else { (d, fd, evals) })
}

fn scan_points<T: Real>(lo: &T, hi: &T, spacing: Spacing) -> Vec<T> {
    let m = SCAN_POINTS - 1;
    (0..=m)
        .map(|i| {
            let frac = T::ratio(i as i64, m as i64);
            match spacing {
                Spacing::Linear => lo.clone() + &(frac * &(hi.clone() - lo)),
                Spacing::Log => {
                    let ratio = hi.clone() / lo;
                    lo.clone() * &ratio.powf(&frac)
                }
            }
        })
        .collect()
}

/// Minimises `f` starting from the bracket `(lo, hi)`.
///
/// The bracket is scanned on a grid; when the best sample sits on an edge the
/// bracket is expanded geometrically in that direction until an interior
/// minimum shows up or the domain limit is reached. The best grid cell is then
/// refined by golden-section search to absolute tolerance `tol`. Among
/// several interior minima the smallest value wins, ties going to the
/// smaller argument.
pub fn minimize_scalar<T: Real, F>(
    mut f: F,
    bracket: (T, T),
    domain: &Domain<T>,
    tol: &T,
) -> Result<ScalarMin<T>>
where
    F: FnMut(&T) -> Result<T>,
{
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    lo = domain.clamp(lo);
    hi = domain.clamp(hi);
    if domain.spacing == Spacing::Log && !lo.gt_zero() {
        return Err(Error::InvalidInput("log-spaced bracket must be positive".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidInput("empty bracket".into()));
    }
    let mut evals = 0;
    // an edge is anchored once the bracket was moved away from it: the old
    // best point lies inside, so a minimum at that edge is really interior
    let (mut lower_anchor, mut upper_anchor) = (false, false);
    for _ in 0..MAX_EXPANSIONS {
        let xs = scan_points(&lo, &hi, domain.spacing);
        let mut fs = Vec::with_capacity(xs.len());
        for x in &xs {
            fs.push(f(x)?);
            evals += 1;
        }
        let mut best = 0;
        for i in 1..fs.len() {
            if fs[i] < fs[best] {
                best = i;
            }
        }
        let last = xs.len() - 1;
        if best == 0 && !lower_anchor && !domain.at_lower(&xs[0]) {
            let width = hi.clone() - &lo;
            let new_lo = match domain.spacing {
                Spacing::Log => lo.clone() / T::from_int(10),
                Spacing::Linear => lo.clone() - &(width * T::from_int(4)),
            };
            hi = xs[1].clone();
            lo = domain.clamp(new_lo);
            upper_anchor = true;
            continue;
        }
        if best == last && !upper_anchor && !domain.at_upper(&xs[last]) {
            let width = hi.clone() - &lo;
            let new_hi = match domain.spacing {
                Spacing::Log => hi.clone() * T::from_int(10),
                Spacing::Linear => hi.clone() + &(width * T::from_int(4)),
            };
            lo = xs[last - 1].clone();
            hi = domain.clamp(new_hi);
            lower_anchor = true;
            continue;
        }
        let a = xs[best.saturating_sub(1)].clone();
        let b = xs[(best + 1).min(last)].clone();
        let (x, fx, n) = golden_section(&mut f, a, b, tol)?;
        evals += n;
        let (x, fx) = if fs[best] < fx {
            (xs[best].clone(), fs[best].clone())
        } else {
            (x, fx)
        };
        let two_tol = tol.clone() * T::from_int(2);
        let pinned = if best == 0
            && domain
                .lower
                .as_ref()
                .is_some_and(|l| (x.clone() - l).abs() <= two_tol)
        {
            Some(Pinned::Lower)
        } else if best == last
            && domain
                .upper
                .as_ref()
                .is_some_and(|u| (u.clone() - &x).abs() <= two_tol)
        {
            Some(Pinned::Upper)
        } else {
            None
        };
        return Ok(ScalarMin {
            argmin: x,
            value: fx,
            pinned,
            evaluations: evals,
        });
    }
    Err(Error::NoMinimum(format!(
        "bracket expanded {MAX_EXPANSIONS} times without enclosing a minimum (last [{}, {}])",
        lo.to_decimal(8),
        hi.to_decimal(8)
    )))
}

/// One coordinate of a two-parameter search.
#[derive(Clone, Debug)]
pub struct Axis<T> {
    pub domain: Domain<T>,
    /// Half-width of the local bracket for linear axes, or the bracket ratio
    /// for log axes.
    pub step: T,
    /// Absolute tolerance on this coordinate.
    pub tol: T,
}

#[derive(Clone, Debug)]
pub struct Min2d<T> {
    pub argmin: (T, T),
    pub value: T,
    pub pinned: bool,
    pub cycles: usize,
    pub evaluations: usize,
}

const MAX_CYCLES: usize = 400;

fn local_bracket<T: Real>(x: &T, axis: &Axis<T>) -> (T, T) {
    match axis.domain.spacing {
        Spacing::Log => (x.clone() / &axis.step, x.clone() * &axis.step),
        Spacing::Linear => (x.clone() - &axis.step, x.clone() + &axis.step),
    }
}

/// Coordinate descent with golden-section inner searches.
///
/// A cycle minimises along the first then the second coordinate. After two
/// cycles the search also tries the extrapolated step between consecutive
/// cycle endpoints, which keeps progress going in curved valleys.
pub fn minimize_2d<T: Real, F>(mut f: F, start: (T, T), axes: &[Axis<T>; 2]) -> Result<Min2d<T>>
where
    F: FnMut(&T, &T) -> Result<T>,
{
    let (mut x, mut y) = (axes[0].domain.clamp(start.0), axes[1].domain.clamp(start.1));
    let mut evals = 0;
    let mut value = f(&x, &y)?;
    evals += 1;
    let mut pinned = false;
    let mut cycles = 0;
    while cycles < MAX_CYCLES {
        cycles += 1;
        let (x0, y0) = (x.clone(), y.clone());

        let yy = y.clone();
        let rx = minimize_scalar(|t| f(t, &yy), local_bracket(&x, &axes[0]), &axes[0].domain, &axes[0].tol)?;
        evals += rx.evaluations;
        x = rx.argmin;
        let xx = x.clone();
        let ry = minimize_scalar(|t| f(&xx, t), local_bracket(&y, &axes[1]), &axes[1].domain, &axes[1].tol)?;
        evals += ry.evaluations;
        y = ry.argmin;
        value = ry.value;
        pinned = rx.pinned.is_some() || ry.pinned.is_some();

        let dx = (x.clone() - &x0).abs();
        let dy = (y.clone() - &y0).abs();
        if dx <= axes[0].tol && dy <= axes[1].tol {
            break;
        }

        // extrapolate along the cycle displacement
        let mut step = T::one();
        for _ in 0..8 {
            let tx = axes[0].domain.clamp(x.clone() + &(step.clone() * &(x.clone() - &x0)));
            let ty = axes[1].domain.clamp(y.clone() + &(step.clone() * &(y.clone() - &y0)));
            if axes[0].domain.spacing == Spacing::Log && !tx.gt_zero() {
                break;
            }
            let ft = f(&tx, &ty)?;
            evals += 1;
            if ft < value {
                x = tx;
                y = ty;
                value = ft;
                step *= T::from_int(2);
            } else {
                break;
            }
        }
    }
    Ok(Min2d {
        argmin: (x, y),
        value,
        pinned,
        cycles,
        evaluations: evals,
    })
}
