//! Minkowski-bound h=1 certification for totally real abelian fields of
//! degree at most 3, with explicit principality witnesses for any residual
//! small primes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::fields::AbelianField;
use crate::lvalues::characters_mod;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub enum Certificate {
    /// h = 1 certified: the bound, the field discriminant, and witnesses
    /// (q, x, y) proving principality of residual degree-1 primes (quadratic
    /// fields only: |x^2 - D y^2| = 4q).
    ClassNumberOne {
        disc: String,
        bound_sq_num: String,
        bound_sq_den: String,
        witnesses: Vec<(u64, i64, i64)>,
    },
    Inconclusive {
        reason: String,
    },
}

impl Certificate {
    pub fn is_h1(&self) -> bool {
        matches!(self, Certificate::ClassNumberOne { .. })
    }
}

/// |disc| of an abelian field by the conductor-discriminant formula:
/// the product of the conductors of its characters.
pub fn abelian_field_disc(field: &AbelianField) -> BigInt {
    let mut d = BigInt::from(1);
    for chi in characters_mod(field.f) {
        if chi.trivial_on(&field.h) {
            d *= BigInt::from(chi.conductor);
        }
    }
    d
}

/// Certify h = 1 for a totally real abelian field of degree <= 3.
pub fn minkowski_certify_h1(field: &AbelianField) -> Result<Certificate> {
    let deg = field.degree();
    if deg > 3 {
        return Err(Error::Unsupported(format!(
            "Minkowski certification limited to degree <= 3, got {deg}"
        )));
    }
    if !field.is_real() {
        return Err(Error::Unsupported("field must be totally real".into()));
    }
    if deg == 1 {
        return Ok(Certificate::ClassNumberOne {
            disc: "1".into(),
            bound_sq_num: "0".into(),
            bound_sq_den: "1".into(),
            witnesses: vec![],
        });
    }
    let disc = abelian_field_disc(field);
    // Minkowski bound M = (n!/n^n) sqrt(|d|) (totally real, r2 = 0);
    // compare M >= q via M^2 >= q^2 exactly
    let nfac: u64 = (1..=deg).product();
    let m_sq = BigRational::new(
        BigInt::from(nfac * nfac) * &disc,
        BigInt::from(deg.pow(2 * deg as u32)),
    );
    let mut witnesses = Vec::new();
    let mut q = 2u64;
    while BigRational::from_integer(BigInt::from(q * q)) <= m_sq {
        // is there a degree-1 prime above q?
        let has_degree_one = if field.f % q == 0 {
            // ramified: residue degree = order of Frobenius in G/I_q;
            // a degree-1 prime exists iff the quotient by inertia has a
            // trivial Frobenius, which for our desk-scale certificates we
            // handle conservatively: treat as present.
            true
        } else {
            // unramified: residue degree = order of the class of q
            let grp = field.galois_group();
            let cls = grp.class_of(q % field.f);
            let mut ord = 1u64;
            let mut x = cls;
            while x != 0 {
                x = grp.mul_idx(x, cls);
                ord += 1;
            }
            ord == 1
        };
        if has_degree_one {
            if deg == 2 {
                // witness: solve |x^2 - D y^2| = 4q with small x, y
                let d = disc.clone();
                let mut found = None;
                'w: for y in 0..200i64 {
                    for x in 0..2000i64 {
                        let lhs = BigInt::from(x) * BigInt::from(x)
                            - &d * BigInt::from(y) * BigInt::from(y);
                        if lhs.abs() == BigInt::from(4 * q) {
                            found = Some((q, x, y));
                            break 'w;
                        }
                    }
                }
                match found {
                    Some(w) => witnesses.push(w),
                    None => {
                        return Ok(Certificate::Inconclusive {
                            reason: format!("no principality witness found for q={q}"),
                        })
                    }
                }
            } else {
                return Ok(Certificate::Inconclusive {
                    reason: format!("degree-1 prime above {q} in a cubic field; no witness search"),
                });
            }
        }
        q += 1;
    }
    Ok(Certificate::ClassNumberOne {
        disc: disc.to_string(),
        bound_sq_num: m_sq.numer().to_string(),
        bound_sq_den: m_sq.denom().to_string(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discs_by_conductor_discriminant() {
        // Q(mu_5)^+ = Q(sqrt 5): disc 5; Q(mu_7)^+: disc 49; Q(mu_9)^+: disc 81
        let d = abelian_field_disc(&AbelianField::max_real_cyclotomic(5).unwrap());
        assert_eq!(d, BigInt::from(5));
        let d = abelian_field_disc(&AbelianField::max_real_cyclotomic(7).unwrap());
        assert_eq!(d, BigInt::from(49));
        let d = abelian_field_disc(&AbelianField::max_real_cyclotomic(9).unwrap());
        assert_eq!(d, BigInt::from(81));
        let d = abelian_field_disc(&AbelianField::real_quadratic(8).unwrap());
        assert_eq!(d, BigInt::from(8));
    }

    #[test]
    fn certifies_the_small_real_fields() {
        // Q
        let c = minkowski_certify_h1(&AbelianField::rationals()).unwrap();
        assert!(c.is_h1());
        // Q(sqrt 5): bound < 2
        let c = minkowski_certify_h1(&AbelianField::real_quadratic(5).unwrap()).unwrap();
        assert!(c.is_h1());
        // Q(mu_7)^+ cubic, disc 49: bound < 2
        let c = minkowski_certify_h1(&AbelianField::max_real_cyclotomic(7).unwrap()).unwrap();
        assert!(c.is_h1());
        // Q(mu_9)^+ cubic, disc 81: bound = 2, but 2 is inert
        let c = minkowski_certify_h1(&AbelianField::max_real_cyclotomic(9).unwrap()).unwrap();
        assert!(c.is_h1(), "{c:?}");
    }

    #[test]
    fn witness_path_works() {
        // Q(sqrt 13): disc 13, bound sqrt(13)/2 = 1.80 < 2: no witnesses needed
        let c = minkowski_certify_h1(&AbelianField::real_quadratic(13).unwrap()).unwrap();
        assert!(c.is_h1());
        // Q(sqrt 17): disc 17, bound 2.06 >= 2: q=2 splits (17 = 1 mod 8):
        // witness |x^2 - 17 y^2| = 8: (5, 1): 25 - 17 = 8
        let c = minkowski_certify_h1(&AbelianField::real_quadratic(17).unwrap()).unwrap();
        match &c {
            Certificate::ClassNumberOne { witnesses, .. } => {
                assert!(!witnesses.is_empty());
            }
            _ => panic!("expected certificate, got {c:?}"),
        }
        // degree cap respected
        assert!(minkowski_certify_h1(&AbelianField::max_real_cyclotomic(25).unwrap()).is_err());
    }
}
