//! Minus class numbers of prime-power cyclotomic fields, exactly:
//! h^- = Q w prod_{chi odd} (-1/2 B_{1,chi}), the product taken over
//! Galois orbits by exact norms in cyclotomic fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::bern::b1_chi;
use crate::arith::{gcd, is_prime};
use crate::fields::CycloElement;
use crate::lvalues::{characters_mod, DirichletChar};
use crate::{Error, Result};

/// Odd characters mod m up to Galois conjugacy (chi ~ chi^s, s coprime to
/// the order).
fn odd_character_orbits(m: u64) -> Vec<DirichletChar> {
    let chars = characters_mod(m);
    let mut seen: Vec<Vec<Option<u64>>> = Vec::new();
    let mut orbits = Vec::new();
    for chi in chars.into_iter().filter(|c| c.is_odd()) {
        if seen.contains(&chi.exps) {
            continue;
        }
        let d = chi.order;
        for s in 1..=d {
            if gcd(s as u128, d as u128) == 1 {
                let conj = chi.pow(s);
                if !seen.contains(&conj.exps) {
                    seen.push(conj.exps.clone());
                }
            }
        }
        orbits.push(chi);
    }
    orbits
}

/// Exact norm of x from Q(mu_D) to Q via the product of all conjugates.
fn norm_to_q(x: &CycloElement) -> Result<BigRational> {
    let d = x.f;
    let mut acc = CycloElement::one(d);
    for a in 1..=d {
        if d == 1 {
            acc = x.clone();
            break;
        }
        if gcd(a as u128, d as u128) == 1 {
            acc = acc.mul(&x.galois(a));
        }
    }
    acc.as_rational()
        .ok_or_else(|| Error::InvalidParam("norm not rational".into()))
}

/// h^-(Q(mu_m)) for m = p^k, p odd, exactly.
pub fn minus_class_number(p: u64, k: u32) -> Result<BigInt> {
    if !is_prime(p) || p == 2 {
        return Err(Error::BadPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidParam("need k >= 1".into()));
    }
    let m = p.pow(k);
    // Q = 1 for prime-power conductor, w = number of roots of unity = 2m
    let w = BigRational::from_integer(BigInt::from(2 * m));
    let mut product = BigRational::one();
    for chi in odd_character_orbits(m) {
        // all odd characters mod p^k are primitive of conductor p^j, j>=1;
        // B_{1,chi} uses the primitive character
        let b1 = b1_chi(&chi);
        let term = b1.scale(&BigRational::new(BigInt::from(-1), BigInt::from(2)));
        product *= norm_to_q(&term)?;
    }
    let h = w * product;
    if !h.is_integer() {
        return Err(Error::InvalidParam(format!(
            "h^- formula gave non-integer {h}"
        )));
    }
    Ok(h.to_integer())
}

/// Float sanity estimate of h^- from complex B1 values (never authoritative).
pub fn minus_class_number_float(p: u64, k: u32) -> f64 {
    let m = p.pow(k);
    let mut acc = 2.0 * m as f64;
    for chi in characters_mod(m).into_iter().filter(|c| c.is_odd()) {
        let mut s = crate::lvalues::Cdd::ZERO;
        for a in 1..m {
            if a % p == 0 {
                continue;
            }
            let v = chi.value_cdd(a).scale(crate::lvalues::Dd::from_f64(a as f64));
            s = s.add(v);
        }
        let b1 = s.scale(crate::lvalues::Dd::from_ratio(-1, 2 * m as i64));
        // product of -1/2 B_{1,chi} over all odd chi is real positive
        acc *= b1.abs();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_minus_class_numbers() {
        assert_eq!(minus_class_number(3, 1).unwrap(), BigInt::from(1));
        assert_eq!(minus_class_number(5, 1).unwrap(), BigInt::from(1));
        assert_eq!(minus_class_number(7, 1).unwrap(), BigInt::from(1));
        assert_eq!(minus_class_number(23, 1).unwrap(), BigInt::from(3));
        assert_eq!(minus_class_number(37, 1).unwrap(), BigInt::from(37));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(minus_class_number(2, 1).is_err());
        assert!(minus_class_number(9, 1).is_err());
        assert!(minus_class_number(5, 0).is_err());
    }

    #[test]
    fn float_estimate_agrees() {
        for (p, expect) in [(3u64, 1.0f64), (23, 3.0), (37, 37.0)] {
            let est = minus_class_number_float(p, 1);
            assert!(
                (est - expect).abs() / expect < 1e-6,
                "p={p}: est {est} vs {expect}"
            );
        }
    }
}
