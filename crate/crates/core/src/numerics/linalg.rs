//! Dense symmetric matrices and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;

/// Symmetric matrix with a single stored copy of each off-diagonal entry
/// (packed lower triangle).
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![T::zero(); dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from `f(i, j)` evaluated for `j <= i` only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        SymMatrix { dim, data }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[packed(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[packed(i, j)] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[packed(i, j)]
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, x| acc.max_of(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Real::is_finite)
    }

    /// Leading `n x n` block.
    pub fn leading_block(&self, n: usize) -> Self {
        assert!(n <= self.dim);
        Self::from_fn(n, |i, j| self.get(i, j).clone())
    }

    /// `P A P^T` for the permutation sending index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..=i {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    /// `self * x` for a dense vector.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = T::zero();
                for (j, xj) in x.iter().enumerate() {
                    acc += self.get(i, j).clone() * xj;
                }
                acc
            })
            .collect()
    }

    /// Quadratic form `x^T A x`.
    pub fn quadratic_form(&self, x: &[T]) -> T {
        let ax = self.mul_vec(x);
        ax.iter().zip(x).map(|(a, b)| a.clone() * b).sum()
    }

    pub fn map(&self, mut f: impl FnMut(&T) -> T) -> Self {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    /// Entrywise `self += factor * other`.
    pub fn add_scaled(&mut self, factor: &T, other: &SymMatrix<T>) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor.clone() * b;
        }
    }
}

/// Ascending eigenvalues with the matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<T>,
    /// `vectors[i]` is the eigenvector of `values[i]`.
    pub vectors: Vec<Vec<T>>,
    pub sweeps: usize,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `max |V^T V - I|`.
    pub fn orthonormality_defect(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..=i {
                let dot: T = self.vectors[i]
                    .iter()
                    .zip(&self.vectors[j])
                    .map(|(a, b)| a.clone() * b)
                    .sum();
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max_of((dot - target).abs());
            }
        }
        worst
    }

    /// `max |A V - V Λ|`.
    pub fn residual(&self, a: &SymMatrix<T>) -> T {
        let mut worst = T::zero();
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            let av = a.mul_vec(v);
            for (x, y) in av.iter().zip(v) {
                worst = worst.max_of((x.clone() - &(lam.clone() * y)).abs());
            }
        }
        worst
    }
}

const MAX_SWEEPS: usize = 100;

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvectors are normalised so that their largest-magnitude component is
/// positive.
pub fn eigh<T: Real>(matrix: &SymMatrix<T>, precision: &PrecisionConfig) -> Result<EigenDecomposition<T>> {
    jacobi(matrix, precision, true)
}

/// Eigenvalues only; skips the rotation accumulation.
pub fn eigvalsh<T: Real>(matrix: &SymMatrix<T>, precision: &PrecisionConfig) -> Result<Vec<T>> {
    jacobi(matrix, precision, false).map(|d| d.values)
}

fn jacobi<T: Real>(
    matrix: &SymMatrix<T>,
    _precision: &PrecisionConfig,
    want_vectors: bool,
) -> Result<EigenDecomposition<T>> {
    let n = matrix.dim();
    if n == 0 {
        return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
    }
    if !matrix.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let eps = T::epsilon();

    // dense copy, only the strict upper triangle is referenced
    let mut a: Vec<T> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(matrix.get(i, j).clone());
        }
    }
    let mut v: Vec<T> = if want_vectors {
        let mut v = vec![T::zero(); n * n];
        for i in 0..n {
            v[i * n + i] = T::one();
        }
        v
    } else {
        Vec::new()
    };
    let mut d: Vec<T> = (0..n).map(|i| a[i * n + i].clone()).collect();
    let mut b = d.clone();
    let mut z = vec![T::zero(); n];

    let mut x = T::zero();
    let mut y = T::zero();
    let mut tmp = T::zero();
    let hundred = T::from_int(100);
    let two = T::from_int(2);
    let nsq = T::from_len(n * n);

    let mut sweeps = 0;
    loop {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].abs();
            }
        }
        let scale = d.iter().fold(T::zero(), |acc, x| acc.max_of(x.abs()));
        if off.is_zero() || off <= eps.clone() * &scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNonConvergence {
                sweeps,
                off_norm: off.lossy_f64(),
            });
        }
        sweeps += 1;
        let thresh = if sweeps < 4 {
            off.clone() / &nsq / T::from_int(5)
        } else {
            T::zero()
        };

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q].clone();
                let g = hundred.clone() * &apq.abs();
                let dp_abs = d[p].abs();
                let dq_abs = d[q].abs();
                if sweeps > 4
                    && g <= eps.clone() * &dp_abs
                    && g <= eps.clone() * &dq_abs
                {
                    a[p * n + q] = T::zero();
                    continue;
                }
                if apq.abs() <= thresh || apq.is_zero() {
                    continue;
                }
                let h = d[q].clone() - &d[p];
                let t = if g <= eps.clone() * &h.abs() {
                    apq.clone() / &h
                } else {
                    let theta = h.clone() / &(two.clone() * &apq);
                    let mut t = T::one()
                        / &(theta.abs() + &(T::one() + &theta.square()).sqrt());
                    if theta.lt_zero() {
                        t = -t;
                    }
                    t
                };
                let c = T::one() / &(T::one() + &t.square()).sqrt();
                let s = t.clone() * &c;
                let shift = t * &apq;
                z[p] -= &shift;
                z[q] += &shift;
                d[p] -= &shift;
                d[q] += &shift;
                a[p * n + q] = T::zero();

                for j in 0..p {
                    rotate(&mut a, j * n + p, j * n + q, &c, &s, &mut x, &mut y, &mut tmp);
                }
                for j in (p + 1)..q {
                    rotate(&mut a, p * n + j, j * n + q, &c, &s, &mut x, &mut y, &mut tmp);
                }
                for j in (q + 1)..n {
                    rotate(&mut a, p * n + j, q * n + j, &c, &s, &mut x, &mut y, &mut tmp);
                }
                if want_vectors {
                    for j in 0..n {
                        rotate(&mut v, j * n + p, j * n + q, &c, &s, &mut x, &mut y, &mut tmp);
                    }
                }
            }
        }
        for i in 0..n {
            b[i] += &z[i];
            d[i] = b[i].clone();
            z[i] = T::zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| d[i].clone()).collect();
    let vectors = if want_vectors {
        order
            .iter()
            .map(|&col| {
                let mut vec: Vec<T> = (0..n).map(|row| v[row * n + col].clone()).collect();
                fix_sign(&mut vec);
                vec
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(EigenDecomposition {
        values,
        vectors,
        sweeps,
    })
}

// (a[i1], a[i2]) <- (c a[i1] - s a[i2], s a[i1] + c a[i2]) without allocating
#[allow(clippy::too_many_arguments)]
#[inline]
fn rotate<T: Real>(a: &mut [T], i1: usize, i2: usize, c: &T, s: &T, x: &mut T, y: &mut T, tmp: &mut T) {
    x.clone_from(&a[i1]);
    y.clone_from(&a[i2]);
    let e1 = &mut a[i1];
    *e1 *= c;
    tmp.clone_from(y);
    *tmp *= s;
    *e1 -= &*tmp;
    let e2 = &mut a[i2];
    *e2 *= c;
    tmp.clone_from(x);
    *tmp *= s;
    *e2 += &*tmp;
}

fn fix_sign<T: Real>(v: &mut [T]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best].lt_zero() {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::BigFloat;

    fn p30() -> PrecisionConfig {
        PrecisionConfig::new(30).unwrap()
    }

    #[test]
    fn diagonal_matrix_is_sorted() {
        let m = SymMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        let e = eigh(&m, &p30()).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(e.vectors[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(e.vectors[1], vec![0.0, 0.0, 1.0]);
        assert_eq!(e.vectors[2], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_by_two_swap() {
        let p = p30();
        let _g = p.activate::<BigFloat>();
        let mut m = SymMatrix::<BigFloat>::zeros(2);
        m.set(1, 0, BigFloat::from_int(1));
        let e = eigh(&m, &p).unwrap();
        let tol = BigFloat::from_int(10).powi(-28);
        assert!((e.values[0].clone() + BigFloat::from_int(1)).abs() < tol);
        assert!((e.values[1].clone() - BigFloat::from_int(1)).abs() < tol);
        assert!(e.orthonormality_defect() < tol);
        assert!(e.residual(&m) < tol);
    }

    #[test]
    fn empty_is_rejected() {
        let m = SymMatrix::<f64>::zeros(0);
        assert!(matches!(eigh(&m, &p30()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn values_only_agree_with_full() {
        let m = SymMatrix::from_fn(6, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let full = eigh(&m, &p30()).unwrap();
        let vals = eigvalsh(&m, &p30()).unwrap();
        for (a, b) in full.values.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn sign_convention_largest_component_positive() {
        let m = SymMatrix::from_fn(4, |i, j| if i == j { i as f64 } else { -0.3 });
        let e = eigh(&m, &p30()).unwrap();
        for v in &e.vectors {
            let big = v.iter().cloned().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(big > 0.0);
        }
    }
}
