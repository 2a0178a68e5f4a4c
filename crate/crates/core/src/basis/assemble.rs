//! Truncated Hamiltonian matrices in the frequency-scaled bases.

use crate::basis::ho::{ho_kinetic_matrix, ho_power_matrix};
use crate::basis::pho::pho_power_matrix;
use crate::basis::potential::{Power, Potential, PotentialKind};
use crate::basis::{BasisFamily, BasisSpec};
use crate::error::{Error, Result};
use crate::numerics::linalg::SymMatrix;
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::scalar::Real;

/// Dispatches on the potential kind.
pub fn assemble<T: Real>(potential: &Potential<T>, basis: &BasisSpec<T>, precision: &PrecisionConfig) -> Result<SymMatrix<T>> {
    match potential.kind {
        PotentialKind::OneDim { .. } => assemble_1d(potential, basis, precision),
        PotentialKind::Radial { .. } => assemble_radial(potential, basis, precision),
    }
}

/// `H = s·Ω·T + Σ c_k Ω^{-k/2} X^k` in the oscillator basis of frequency Ω.
pub fn assemble_1d<T: Real>(potential: &Potential<T>, basis: &BasisSpec<T>, _precision: &PrecisionConfig) -> Result<SymMatrix<T>> {
    let PotentialKind::OneDim { parity } = potential.kind else {
        return Err(Error::InvalidInput("assemble_1d needs a one-dimensional potential".into()));
    };
    let BasisFamily::Oscillator { parity: basis_parity } = basis.family else {
        return Err(Error::InvalidInput("one-dimensional potentials need the oscillator basis".into()));
    };
    if parity != basis_parity {
        return Err(Error::InvalidInput(format!(
            "potential sector {} does not match basis sector {}",
            parity.name(),
            basis_parity.name()
        )));
    }
    basis.validate()?;
    let omega = &basis.omega;
    let mut h = ho_kinetic_matrix::<T>(basis.size, parity);
    let scale = potential.kinetic_scale.clone() * omega;
    h = h.map(|v| v.clone() * &scale);
    for term in &potential.terms {
        if term.coeff.is_zero() {
            continue;
        }
        let k = term.power.as_integer().filter(|k| *k >= 0).ok_or_else(|| {
            Error::InvalidInput(format!("power {} is not a nonnegative integer", term.power))
        })?;
        let factor = term.coeff.clone() * omega.powf(&(-term.power.half::<T>()));
        let x = ho_power_matrix::<T>(basis.size, k as u32, parity);
        h.add_scaled(&factor, &x);
    }
    Ok(h)
}

/// Centrifugal mismatch `γ² − 2γ + 3/4 − l(l+1)` of the basis.
pub fn centrifugal_mismatch<T: Real>(gamma: &T, l: u32) -> T {
    gamma.square() - gamma.clone() * T::from_int(2) + T::ratio(3, 4) - T::from_int(i64::from(l) * (i64::from(l) + 1))
}

/// Radial Hamiltonian in the pseudoharmonic basis of frequency Ω and index γ:
///
/// `H_mn = s(2n+γ)Ω δ_mn + (c₂ − sΩ²/2)/Ω ⟨r²⟩ − (sΩ/2)(γ²−2γ+3/4−l(l+1)) ⟨r⁻²⟩
///        + Σ_{k≠2} c_k Ω^{-k/2} ⟨r^k⟩`
pub fn assemble_radial<T: Real>(
    potential: &Potential<T>,
    basis: &BasisSpec<T>,
    _precision: &PrecisionConfig,
) -> Result<SymMatrix<T>> {
    let PotentialKind::Radial { l } = potential.kind else {
        return Err(Error::InvalidInput("assemble_radial needs a radial potential".into()));
    };
    let BasisFamily::PseudoHarmonic { gamma } = &basis.family else {
        return Err(Error::InvalidInput("radial potentials need the pseudoharmonic basis".into()));
    };
    basis.validate()?;
    let n = basis.size;
    let omega = &basis.omega;
    let s = &potential.kinetic_scale;
    let two = T::from_int(2);

    let mut h = SymMatrix::from_diagonal(
        &(0..n)
            .map(|i| s.clone() * &(T::from_len(2 * i) + gamma) * omega)
            .collect::<Vec<_>>(),
    );

    let c2 = potential.coefficient(Power::int(2));
    let r2_factor = (c2 - s.clone() * &omega.square() / &two) / omega;
    if !r2_factor.is_zero() {
        h.add_scaled(&r2_factor, &pho_power_matrix::<T>(n, Power::int(2), gamma)?);
    }

    let inv_sq = potential.coefficient(Power::int(-2)) * omega
        - s.clone() * omega / &two * &centrifugal_mismatch(gamma, l);
    if !inv_sq.is_zero() {
        h.add_scaled(&inv_sq, &pho_power_matrix::<T>(n, Power::int(-2), gamma)?);
    }

    for term in &potential.terms {
        if term.coeff.is_zero() || term.power == Power::int(2) || term.power == Power::int(-2) {
            continue;
        }
        let factor = term.coeff.clone() * omega.powf(&(-term.power.half::<T>()));
        h.add_scaled(&factor, &pho_power_matrix::<T>(n, term.power, gamma)?);
    }
    if !h.is_finite() {
        return Err(Error::Inadmissible("assembled Hamiltonian is not finite".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::potential::{Parity, Term};
    use crate::numerics::quadrature::{quadrature, QuadDomain};
    use crate::BigFloat;
    use num_traits::Signed;

    fn p30() -> PrecisionConfig {
        PrecisionConfig::new(30).unwrap()
    }

    #[test]
    fn exact_oscillator_is_diagonal() {
        let pot = Potential::quartic(2.25, 0.0, Parity::Even).unwrap();
        let basis = BasisSpec::oscillator(Parity::Even, 5, 1.5);
        let h = assemble(&pot, &basis, &p30()).unwrap();
        for i in 0..5 {
            for j in 0..=i {
                let want = if i == j { 1.5 * (2.0 * i as f64 + 0.5) } else { 0.0 };
                assert!((h.get(i, j) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn quartic_single_state() {
        // H₀₀ = Ω/4 + 1/(4Ω) + 3/(8Ω²)
        let pot = Potential::quartic(1.0, 0.5, Parity::Even).unwrap();
        for omega in [0.7, 1.0, 1.9] {
            let h = assemble(&pot, &BasisSpec::oscillator(Parity::Even, 1, omega), &p30()).unwrap();
            let want = omega / 4.0 + 1.0 / (4.0 * omega) + 3.0 / (8.0 * omega * omega);
            assert!((h.get(0, 0) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn sextic_corner_element() {
        let p = p30();
        let _g = p.activate::<BigFloat>();
        let w2 = -(BigFloat::from_int(35) * BigFloat::from_int(2).sqrt());
        let pot = Potential::sextic(w2.clone(), BigFloat::from_int(1), Parity::Even).unwrap();
        let h = assemble(&pot, &BasisSpec::oscillator(Parity::Even, 3, BigFloat::from_int(1)), &p).unwrap();
        let want = BigFloat::ratio(1, 4) + w2 / BigFloat::from_int(4) + BigFloat::ratio(15, 8);
        assert!((h.get(0, 0).clone() - want).abs() < BigFloat::from_int(10).powi(-27));
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        let pot = Potential::quartic(1.0, 0.5, Parity::Even).unwrap();
        assert!(assemble(&pot, &BasisSpec::oscillator(Parity::Odd, 3, 1.0), &p30()).is_err());
    }

    #[test]
    fn radial_oscillator_reduction() {
        for l in 0..3u32 {
            let gamma = l as f64 + 1.5;
            let pot = Potential::radial_power(l, 4.0, 0.0, Power::int(6)).unwrap();
            let h = assemble(&pot, &BasisSpec::pseudo_harmonic(4, 2.0, gamma), &p30()).unwrap();
            for i in 0..4 {
                for j in 0..=i {
                    let want = if i == j { 2.0 * (2.0 * i as f64 + gamma) } else { 0.0 };
                    assert!((h.get(i, j) - want).abs() < 1e-12, "l={l} ({i},{j})");
                }
            }
        }
    }

    /// Normalised radial oscillator state at unit frequency with index γ, and
    /// its second derivative.
    fn basis_pair(n: usize, gamma: &BigFloat, omega: &BigFloat, r: &BigFloat) -> (BigFloat, BigFloat) {
        // u(ρ) with ρ = √Ω r, built from the Laguerre series
        let a = gamma.clone() - BigFloat::from_int(1);
        let rho = omega.sqrt() * r;
        let y = rho.square();
        let mut coeffs = Vec::new();
        // L_n^{(a)}(y) = Σ_i (-1)^i C(n+a, n-i) y^i / i!
        for i in 0..=n {
            let lg = (BigFloat::from_len(n) + &a + BigFloat::from_int(1)).ln_gamma()
                - (BigFloat::from_len(n - i) + BigFloat::from_int(1)).ln_gamma()
                - (a.clone() + BigFloat::from_len(i) + BigFloat::from_int(1)).ln_gamma()
                - BigFloat::from_len(i + 1).ln_gamma();
            let c = lg.exp() * if i % 2 == 0 { BigFloat::from_int(1) } else { BigFloat::from_int(-1) };
            coeffs.push(c);
        }
        let log_norm = (gamma.clone() + BigFloat::from_len(n)).ln_gamma()
            - BigFloat::from_len(n + 1).ln_gamma()
            - BigFloat::from_int(2).ln();
        let sign = if n % 2 == 0 { BigFloat::from_int(1) } else { BigFloat::from_int(-1) };
        let norm = sign * (-log_norm / BigFloat::from_int(2)).exp() * omega.sqrt().sqrt();
        // f(ρ) = Σ c_i ρ^{2i + γ - 1/2} e^{-ρ²/2}; differentiate term by term
        let mut f = BigFloat::from_int(0);
        let mut f2 = BigFloat::from_int(0);
        let e = (-(y.clone()) / BigFloat::from_int(2)).exp();
        for (i, c) in coeffs.iter().enumerate() {
            let q = BigFloat::from_len(2 * i) + gamma - BigFloat::ratio(1, 2);
            let base = rho.powf(&q);
            // d²/dρ² [ρ^q e^{-ρ²/2}] = (q(q-1)/ρ² − (2q+1) + ρ²) ρ^q e^{-ρ²/2}
            let second = q.clone() * &(q.clone() - BigFloat::from_int(1)) / &y - (q * BigFloat::from_int(2) + BigFloat::from_int(1)) + &y;
            f += c.clone() * &base;
            f2 += c.clone() * &base * &second;
        }
        (f * &e * &norm, f2 * &e * &norm * omega)
    }

    #[test]
    fn radial_sextic_against_quadrature() {
        let p = p30();
        let _g = p.activate::<BigFloat>();
        let l = 1u32;
        let w2 = -(BigFloat::from_int(39) * BigFloat::from_int(2).sqrt());
        let pot = Potential::radial_power(l, w2.clone(), BigFloat::from_int(1), Power::int(6)).unwrap();
        let omega = BigFloat::from_int(3);
        let gamma = BigFloat::ratio(5, 2);
        let h = assemble(&pot, &BasisSpec::pseudo_harmonic(3, omega.clone(), gamma.clone()), &p).unwrap();
        let centrifugal = BigFloat::from_int(i64::from(l * (l + 1)));
        for i in 0..3 {
            for j in 0..=i {
                // weak form ⟨u_i| −½u_j'' + (l(l+1)/2r² + V) u_j⟩
                let q = quadrature(
                    |r: &BigFloat| {
                        let (ui, _) = basis_pair(i, &gamma, &omega, r);
                        let (uj, uj2) = basis_pair(j, &gamma, &omega, r);
                        let r2 = r.square();
                        let v = centrifugal.clone() / (r2.clone() * BigFloat::from_int(2))
                            + w2.clone() / BigFloat::from_int(2) * &r2
                            + r2.powi(3);
                        ui * (-(uj2) / BigFloat::from_int(2) + v * uj)
                    },
                    QuadDomain::HalfLine,
                    &p,
                )
                .unwrap()
                .value;
                let err = (q.clone() - h.get(i, j)).abs();
                assert!(err < BigFloat::from_int(10).powi(-18) * q.abs().max_of(BigFloat::from_int(1)), "({i},{j}) {err}");
            }
        }
    }

    #[test]
    fn random_radial_inputs_are_symmetric_and_finite() {
        let pot = Potential::<f64>::new(
            PotentialKind::Radial { l: 2 },
            vec![
                Term::new(Power::int(2), 0.3),
                Term::new(Power::parse("-1.5").unwrap(), 1.2),
                Term::new(Power::int(4), 0.1),
            ],
        )
        .unwrap();
        let h = assemble(&pot, &BasisSpec::pseudo_harmonic(6, 1.3, 2.2), &p30()).unwrap();
        assert!(h.is_finite());
        assert!(assemble(&pot, &BasisSpec::pseudo_harmonic(6, 1.3, 0.9), &p30()).is_err());
    }
}
