//! Matrix elements of `r^k` in the unit-frequency pseudoharmonic basis
//! `u_n(r) ∝ r^{γ-1/2} e^{-r²/2} L_n^{(γ-1)}(r²)`.
//!
//! With `s = k/2`,
//! `⟨m|r^k|n⟩ = √(m! n! / (Γ(γ+m) Γ(γ+n))) Σ_{j ≤ min(m,n)} C(s, m-j) C(s, n-j) Γ(γ+s+j) / j!`,
//! where `C` is the generalized binomial coefficient. The sum is evaluated
//! through Gamma ratios normalised by `Γ(γ)` so that nothing overflows.

use crate::basis::potential::Power;
use crate::error::{Error, Result};
use crate::numerics::linalg::SymMatrix;
use crate::numerics::scalar::Real;

/// Minimum distance kept from a pole of the closed form.
pub const POLE_GUARD: f64 = 1e-6;

struct Tables<T> {
    /// `C(s, q)` for `q < size`.
    binom: Vec<T>,
    /// `Γ(γ+s+j) / (Γ(γ) j!)`.
    rho: Vec<T>,
    /// `1/√(Γ(γ+n) / (Γ(γ) n!))`.
    inv_norm: Vec<T>,
}

fn tables<T: Real>(size: usize, k: Power, gamma: &T) -> Result<Tables<T>> {
    if !gamma.is_finite() || !gamma.gt_zero() {
        return Err(Error::Inadmissible(format!("γ = {} must be positive", gamma.to_decimal(12))));
    }
    let s = k.half::<T>();
    let shifted = gamma.clone() + &s;
    let guard = T::from_f64(POLE_GUARD / 2.0).unwrap_or_else(T::epsilon);
    if shifted < guard {
        return Err(Error::Inadmissible(format!(
            "r^{k} needs γ > {}, got {}",
            (-s).to_decimal(12),
            gamma.to_decimal(12)
        )));
    }
    let mut binom = Vec::with_capacity(size);
    let mut c = T::one();
    for q in 0..size {
        if q > 0 {
            c = c * &(s.clone() - T::from_len(q - 1)) / T::from_len(q);
        }
        binom.push(c.clone());
    }
    let mut rho = Vec::with_capacity(size);
    let mut r = (shifted.ln_gamma() - gamma.ln_gamma()).exp();
    for j in 0..size {
        if j > 0 {
            r = r * &(shifted.clone() + T::from_len(j - 1)) / T::from_len(j);
        }
        rho.push(r.clone());
    }
    let mut inv_norm = Vec::with_capacity(size);
    let mut eta = T::one();
    for n in 0..size {
        if n > 0 {
            eta = eta * &(gamma.clone() + T::from_len(n - 1)) / T::from_len(n);
        }
        inv_norm.push(T::one() / eta.sqrt());
    }
    Ok(Tables { binom, rho, inv_norm })
}

fn element<T: Real>(t: &Tables<T>, m: usize, n: usize) -> T {
    let mut acc = T::zero();
    for j in 0..=m.min(n) {
        acc += t.binom[m - j].clone() * &t.binom[n - j] * &t.rho[j];
    }
    acc * &t.inv_norm[m] * &t.inv_norm[n]
}

/// Full `size × size` matrix of `r^k`.
pub fn pho_power_matrix<T: Real>(size: usize, k: Power, gamma: &T) -> Result<SymMatrix<T>> {
    if k == Power::int(0) {
        return Ok(SymMatrix::identity(size));
    }
    let t = tables(size, k, gamma)?;
    let m = SymMatrix::from_fn(size, |i, j| element(&t, i, j));
    if !m.is_finite() {
        return Err(Error::Inadmissible(format!("r^{k} elements overflow at γ = {}", gamma.to_decimal(12))));
    }
    Ok(m)
}

/// Diagonal of [`pho_power_matrix`].
pub fn pho_power_diagonal<T: Real>(size: usize, k: Power, gamma: &T) -> Result<Vec<T>> {
    if k == Power::int(0) {
        return Ok(vec![T::one(); size]);
    }
    if k == Power::int(2) {
        pole_check(k, gamma)?;
        return Ok((0..size).map(|n| T::from_len(2 * n) + gamma).collect());
    }
    let t = tables(size, k, gamma)?;
    Ok((0..size).map(|n| element(&t, n, n)).collect())
}

/// Rejects γ that sits on or below the integrability bound of `r^k`.
pub fn pole_check<T: Real>(k: Power, gamma: &T) -> Result<()> {
    tables::<T>(0, k, gamma).map(|_| ())
}
