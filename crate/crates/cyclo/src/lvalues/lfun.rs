//! Dirichlet L-values: exact at s=0 via generalized Bernoulli numbers,
//! floats at s=1 via the functional equation cross-checked against a
//! digamma series.

use num_rational::BigRational;

use super::chars::{gauss_sum, DirichletChar};
use super::dd::{digamma, Cdd, Dd};
use super::cyclo_to_cdd;
use crate::classgrp::b1_chi;
use crate::fields::CycloElement;
use crate::{Error, Result};

/// Exact S-truncated value at s=0:
/// L_S(0, chi) = -B_{1,chihat} prod_{q in S, q not | f_chi} (1 - chihat(q)),
/// as a cyclotomic number in the character's value field.
pub fn l0_truncated_exact(chi: &DirichletChar, s_primes: &[u64]) -> CycloElement {
    let d_field = chi.order_field_conductor();
    if !chi.is_odd() {
        // B_1 vanishes for even nontrivial chi; for the principal character
        // every Euler factor (1 - 1) kills the value once S is nonempty.
        if chi.is_principal() && s_primes.is_empty() {
            return CycloElement::from_rational(1, BigRational::new((-1).into(), 2.into()));
        }
        return CycloElement::zero(d_field);
    }
    let mut val = b1_chi(chi).neg();
    for &q in s_primes {
        if chi.conductor % q == 0 {
            continue;
        }
        let factor = CycloElement::one(d_field)
            .sub(&chi.primitive_value_root(q).expect("q coprime to f_chi"));
        val = val.mul(&factor);
    }
    val
}

/// L(1, chihat) for odd chi via the functional equation
/// L(1, chi) = i pi tau(chi) B_{1, chibar} / f_chi.
pub fn l1_primitive_fe(chi: &DirichletChar) -> Result<Cdd> {
    if !chi.is_odd() {
        return Err(Error::Unsupported("functional-equation path needs odd chi".into()));
    }
    let tau = gauss_sum(chi);
    let b1bar = cyclo_to_cdd(&b1_chi(&chi.inverse()));
    let ipi = Cdd::I.scale(Dd::PI);
    Ok(ipi
        .mul(tau)
        .mul(b1bar)
        .scale(Dd::ONE.div(Dd::from_f64(chi.conductor as f64))))
}

/// L(1, chihat) by the digamma series
/// L(1, chi) = -(1/f) sum_a chihat(a) psi(a/f), the independent oracle.
pub fn l1_primitive_series(chi: &DirichletChar) -> Result<Cdd> {
    if chi.is_principal() {
        return Err(Error::Unsupported("L(1) diverges for the principal character".into()));
    }
    let f = chi.conductor;
    let mut s = Cdd::ZERO;
    for a in 1..f {
        if crate::arith::gcd(a as u128, f as u128) != 1 {
            continue;
        }
        let v = chi.primitive_value_cdd(a);
        let psi = digamma(Dd::from_ratio(a as i64, f as i64));
        s = s.add(v.scale(psi));
    }
    Ok(s.scale(Dd::from_ratio(-1, f as i64)))
}

/// S-truncation factor at s=1: prod_{q in S, q not | f_chi} (1 - chihat(q)/q).
pub fn s_factor_at_1(chi: &DirichletChar, s_primes: &[u64]) -> Cdd {
    let mut f = Cdd::ONE;
    for &q in s_primes {
        if chi.conductor % q == 0 {
            continue;
        }
        let term = Cdd::ONE.sub(
            chi.primitive_value_cdd(q)
                .scale(Dd::ONE.div(Dd::from_f64(q as f64))),
        );
        f = f.mul(term);
    }
    f
}

/// The pair (L_S(0, chi) exact, L_S(1, chi) float) per the operation
/// contract; s=1 goes through the functional equation and is cross-checked
/// against the digamma series to 1e-10.
pub fn l_values(chi: &DirichletChar, s_primes: &[u64]) -> Result<(CycloElement, Cdd)> {
    if chi.is_principal() {
        return Err(Error::Unsupported("s=1 undefined for the principal character".into()));
    }
    let l0 = l0_truncated_exact(chi, s_primes);
    let l1 = if chi.is_odd() {
        let fe = l1_primitive_fe(chi)?;
        let series = l1_primitive_series(chi)?;
        if fe.sub(series).abs() > 1e-10 {
            return Err(Error::Precision(format!(
                "functional-equation and series paths disagree: {:e}",
                fe.sub(series).abs()
            )));
        }
        fe
    } else {
        // even chi: only the series path (no FE shortcut needed here)
        l1_primitive_series(chi)?
    };
    Ok((l0, l1.mul(s_factor_at_1(chi, s_primes))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lvalues::characters_mod;

    #[test]
    fn l1_of_odd_char_mod_4_is_pi_over_4() {
        let chi = characters_mod(4).into_iter().find(|c| c.is_odd()).unwrap();
        let fe = l1_primitive_fe(&chi).unwrap();
        let series = l1_primitive_series(&chi).unwrap();
        let want = std::f64::consts::PI / 4.0;
        assert!((fe.re.to_f64() - want).abs() < 1e-25, "{}", fe.re.to_f64());
        assert!(fe.im.to_f64().abs() < 1e-25);
        assert!((series.re.to_f64() - want).abs() < 1e-12);
    }

    #[test]
    fn l0_of_odd_char_mod_3() {
        // B_{1,chi} = -1/3 so L(0, chi) = 1/3 (untruncated)
        let chi = characters_mod(3).into_iter().find(|c| c.is_odd()).unwrap();
        let v = l0_truncated_exact(&chi, &[]);
        assert_eq!(
            v.as_rational().unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        // S-truncation with extra prime q multiplies by (1 - chi(q)) exactly
        let v5 = l0_truncated_exact(&chi, &[5]);
        let factor = CycloElement::one(1).sub(&chi.primitive_value_root(5).unwrap());
        assert_eq!(v5, v.mul(&factor));
    }

    #[test]
    fn fe_vs_series_small_conductors() {
        for f in 3..=24u64 {
            if f % 4 == 2 {
                continue;
            }
            for chi in characters_mod(f).into_iter().filter(|c| c.is_odd()) {
                if chi.conductor != f {
                    continue; // primitive ones only; imprimitive are lifts
                }
                let fe = l1_primitive_fe(&chi).unwrap();
                let series = l1_primitive_series(&chi).unwrap();
                assert!(
                    fe.sub(series).abs() < 1e-10,
                    "f={f}: {:e}",
                    fe.sub(series).abs()
                );
            }
        }
    }

    #[test]
    fn nonvanishing_at_1() {
        for f in 3..=40u64 {
            if f % 4 == 2 {
                continue;
            }
            for chi in characters_mod(f).into_iter().filter(|c| c.is_odd()) {
                let l1 = l1_primitive_fe(&chi).unwrap();
                assert!(l1.abs() > 1e-6, "L(1, chi) must not vanish (f={f})");
            }
        }
    }
}
