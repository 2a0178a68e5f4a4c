//! Matrix elements in the unit-frequency harmonic-oscillator basis.

use crate::basis::potential::Parity;
use crate::numerics::linalg::SymMatrix;
use crate::numerics::scalar::Real;

/// `⟨n|x|n+1⟩ = √((n+1)/2)` for `n < dim - 1`.
fn ladder<T: Real>(dim: usize) -> Vec<T> {
    (0..dim.saturating_sub(1))
        .map(|n| (T::from_len(n + 1) / T::from_int(2)).sqrt())
        .collect()
}

/// `x^k e_n` in the full oscillator basis, padded so that it is exact.
fn power_column<T: Real>(n: usize, k: u32, off: &[T]) -> Vec<T> {
    let dim = n + k as usize + 1;
    let mut v = vec![T::zero(); dim];
    v[n] = T::one();
    let mut w = vec![T::zero(); dim];
    for _ in 0..k {
        for i in 0..dim {
            let mut acc = T::zero();
            if i > 0 {
                acc += off[i - 1].clone() * &v[i - 1];
            }
            if i + 1 < dim {
                acc += off[i].clone() * &v[i + 1];
            }
            w[i] = acc;
        }
        std::mem::swap(&mut v, &mut w);
    }
    v
}

/// Exact `⟨m|x^k|n⟩` for the `size` lowest states of a parity sector at unit
/// frequency.
pub fn ho_power_matrix<T: Real>(size: usize, k: u32, parity: Parity) -> SymMatrix<T> {
    let top = parity.index(size.saturating_sub(1));
    let off = ladder::<T>(top + k as usize + 1);
    let columns: Vec<Vec<T>> = (0..size).map(|j| power_column(parity.index(j), k, &off)).collect();
    SymMatrix::from_fn(size, |i, j| {
        let col = &columns[j];
        col.get(parity.index(i)).cloned().unwrap_or_else(T::zero)
    })
}

/// Diagonal of [`ho_power_matrix`].
pub fn ho_power_diagonal<T: Real>(size: usize, k: u32, parity: Parity) -> Vec<T> {
    if k % 2 == 1 {
        return vec![T::zero(); size];
    }
    let top = parity.index(size.saturating_sub(1));
    let off = ladder::<T>(top + k as usize + 1);
    (0..size)
        .map(|j| {
            let n = parity.index(j);
            power_column(n, k, &off)[n].clone()
        })
        .collect()
}

/// Exact kinetic energy `p²/2` at unit frequency: diagonal `(n + ½)/2`,
/// `⟨n|T|n+2⟩ = -√((n+1)(n+2))/4`.
pub fn ho_kinetic_matrix<T: Real>(size: usize, parity: Parity) -> SymMatrix<T> {
    SymMatrix::from_fn(size, |i, j| {
        let (m, n) = (parity.index(i), parity.index(j));
        if m == n {
            kinetic_diagonal(n)
        } else if m == n + 2 {
            -(T::from_len((n + 1) * (n + 2))).sqrt() / T::from_int(4)
        } else {
            T::zero()
        }
    })
}

pub(crate) fn kinetic_diagonal<T: Real>(n: usize) -> T {
    T::from_len(2 * n + 1) / T::from_int(4)
}
