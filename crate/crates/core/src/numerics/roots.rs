//! Tridiagonal determinants and real root isolation by sign scanning.

use num_traits::Num;

use crate::error::{Error, Result};
use crate::numerics::scalar::Real;

/// Determinant of the `(p+1) x (p+1)` tridiagonal matrix with diagonal `b`,
/// super-diagonal `a` and sub-diagonal `c` (`c[0]` unused):
/// `D_k = b_k D_{k-1} - a_{k-1} c_k D_{k-2}` with `D_{-1} = 1`, `D_{-2} = 0`.
///
/// Works over any commutative ring, so exact rationals can be used as well.
pub fn continuant_det<T: Clone + Num>(a: &[T], b: &[T], c: &[T], p: usize) -> T {
    continuant_sequence(a, b, c, p).pop().expect("p + 1 >= 1 entries")
}

/// The whole sequence `D_0, ..., D_p`.
pub fn continuant_sequence<T: Clone + Num>(a: &[T], b: &[T], c: &[T], p: usize) -> Vec<T> {
    assert!(b.len() > p, "need p+1 diagonal entries");
    assert!(p == 0 || (a.len() >= p && c.len() > p), "need p off-diagonal entries");
    let mut out = Vec::with_capacity(p + 1);
    let mut prev2 = T::zero();
    let mut prev1 = T::one();
    for k in 0..=p {
        let mut dk = b[k].clone() * prev1.clone();
        if k > 0 {
            dk = dk - a[k - 1].clone() * c[k].clone() * prev2.clone();
        }
        out.push(dk.clone());
        prev2 = prev1;
        prev1 = dk;
    }
    out
}

/// Sample layout for a sign scan.
#[derive(Clone, Debug)]
pub enum ScanGrid<T> {
    Uniform { lo: T, hi: T, points: usize },
    /// Geometric spacing on a positive interval.
    Geometric { lo: T, hi: T, points: usize },
}

impl<T: Real> ScanGrid<T> {
    fn samples(&self) -> Vec<T> {
        match self {
            ScanGrid::Uniform { lo, hi, points } => {
                let m = (*points).max(2) - 1;
                (0..=m)
                    .map(|i| lo.clone() + &(T::ratio(i as i64, m as i64) * &(hi.clone() - lo)))
                    .collect()
            }
            ScanGrid::Geometric { lo, hi, points } => {
                let m = (*points).max(2) - 1;
                let ratio = hi.clone() / lo;
                (0..=m)
                    .map(|i| lo.clone() * &ratio.powf(&T::ratio(i as i64, m as i64)))
                    .collect()
            }
        }
    }

    fn refined(&self) -> Self {
        match self {
            ScanGrid::Uniform { lo, hi, points } => ScanGrid::Uniform {
                lo: lo.clone(),
                hi: hi.clone(),
                points: points * 2,
            },
            ScanGrid::Geometric { lo, hi, points } => ScanGrid::Geometric {
                lo: lo.clone(),
                hi: hi.clone(),
                points: points * 2,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root<T> {
    pub value: T,
    /// 1 for a sign change, 2 for a touching (double) root.
    pub multiplicity: u8,
}

#[derive(Clone, Debug)]
pub struct RootScan<T> {
    pub roots: Vec<Root<T>>,
    /// False when fewer roots than the caller's hint were found.
    pub complete: bool,
}

impl<T: Real> RootScan<T> {
    pub fn values(&self) -> Vec<T> {
        self.roots.iter().map(|r| r.value.clone()).collect()
    }

    /// Count with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }

    pub fn require_complete(self, expected: usize) -> Result<Self> {
        if self.complete {
            Ok(self)
        } else {
            Err(Error::MissingRoots {
                found: self.count(),
                expected,
            })
        }
    }
}

const MAX_REFINEMENTS: usize = 6;
const MAX_BISECTIONS: usize = 4000;

/// All real roots of `f` on the grid's interval, sorted ascending.
///
/// Sign changes between consecutive samples are refined by bisection to a
/// relative width of `tol`. Samples where `|f|` has a local minimum without a
/// sign change are refined by golden-section search and reported as double
/// roots when the minimum is below `tol` times the largest sample magnitude.
/// The grid is doubled until `count_hint` roots are found or the refinement
/// budget runs out.
pub fn poly_roots_real<T: Real, F>(mut f: F, grid: ScanGrid<T>, count_hint: usize, tol: &T) -> RootScan<T>
where
    F: FnMut(&T) -> T,
{
    let mut grid = grid;
    let mut best = RootScan {
        roots: Vec::new(),
        complete: count_hint == 0,
    };
    for _ in 0..=MAX_REFINEMENTS {
        let found = scan_once(&mut f, &grid, tol);
        let count: usize = found.iter().map(|r| r.multiplicity as usize).sum();
        let best_count = best.count();
        if count >= best_count {
            best.roots = found;
        }
        if count >= count_hint {
            best.complete = true;
            return best;
        }
        grid = grid.refined();
    }
    best.complete = best.count() >= count_hint;
    best
}

fn scan_once<T: Real, F>(f: &mut F, grid: &ScanGrid<T>, tol: &T) -> Vec<Root<T>>
where
    F: FnMut(&T) -> T,
{
    let xs = grid.samples();
    let fs: Vec<T> = xs.iter().map(|x| f(x)).collect();
    let scale = fs.iter().fold(T::zero(), |acc, v| acc.max_of(v.abs()));
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        if fs[i].is_zero() {
            roots.push(Root {
                value: xs[i].clone(),
                multiplicity: 1,
            });
            continue;
        }
        if i + 1 < xs.len() && !fs[i + 1].is_zero() && fs[i].lt_zero() != fs[i + 1].lt_zero() {
            let r = bisect(f, xs[i].clone(), xs[i + 1].clone(), fs[i].lt_zero(), tol);
            roots.push(Root {
                value: r,
                multiplicity: 1,
            });
        }
        if i > 0 && i + 1 < xs.len() {
            let (l, m, r) = (fs[i - 1].abs(), fs[i].abs(), fs[i + 1].abs());
            let same_sign = fs[i - 1].lt_zero() == fs[i].lt_zero()
                && fs[i].lt_zero() == fs[i + 1].lt_zero();
            if same_sign && m < l && m < r {
                roots.extend(hidden_roots(f, xs[i - 1].clone(), xs[i + 1].clone(), fs[i].lt_zero(), &scale, tol));
            }
        }
    }
    roots.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal));
    roots
}

fn bisect<T: Real, F>(f: &mut F, mut lo: T, mut hi: T, lo_negative: bool, tol: &T) -> T
where
    F: FnMut(&T) -> T,
{
    let two = T::from_int(2);
    for _ in 0..MAX_BISECTIONS {
        let mid = (lo.clone() + &hi) / &two;
        let width = (hi.clone() - &lo).abs();
        let mag = mid.abs().max_of(T::epsilon());
        if width <= tol.clone() * &mag || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(&mid);
        if fm.is_zero() {
            return mid;
        }
        if fm.lt_zero() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + &hi) / two
}

/// Looks for roots between samples of equal sign: either a touching (double)
/// root or a close pair that the grid stepped over.
fn hidden_roots<T: Real, F>(f: &mut F, a: T, b: T, negative: bool, scale: &T, tol: &T) -> Vec<Root<T>>
where
    F: FnMut(&T) -> T,
{
    let width_tol = tol.clone() * &a.abs().max_of(b.abs()).max_of(T::epsilon());
    let oriented = |v: T| if negative { -v } else { v };
    let Ok((x, fx, _)) = super::minimize::golden_section(|x: &T| Ok(oriented(f(x))), a.clone(), b.clone(), &width_tol) else {
        return Vec::new();
    };
    if fx.lt_zero() {
        let left = bisect(f, a, x.clone(), negative, tol);
        let right = bisect(f, x, b, !negative, tol);
        return vec![
            Root { value: left, multiplicity: 1 },
            Root { value: right, multiplicity: 1 },
        ];
    }
    if fx <= tol.clone() * scale {
        vec![Root { value: x, multiplicity: 2 }]
    } else {
        Vec::new()
    }
}
