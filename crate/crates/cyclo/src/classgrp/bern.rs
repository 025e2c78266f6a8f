//! Exact Bernoulli numbers, generalized Bernoulli numbers B_{1,chi} as
//! cyclotomic numbers, and irregular-pair detection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::fields::CycloElement;
use crate::lvalues::DirichletChar;

/// Exact B_0..B_kmax by the defining recurrence
/// sum_{j<=m} C(m+1, j) B_j = 0 (B_1 = -1/2 convention).
pub fn bernoulli_numbers(k_max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(k_max + 1);
    b.push(BigRational::one());
    for m in 1..=k_max {
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut s = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            if j > 0 {
                // C(m+1, j) from C(m+1, j-1)
                binom = &binom * BigInt::from(m + 2 - j) / BigInt::from(j);
            }
            s += bj * BigRational::from_integer(binom.clone());
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// von Staudt-Clausen: for even k >= 2 the denominator of B_k is the
/// product of primes q with (q-1) | k.
pub fn von_staudt_clausen_denominator(k: u64) -> BigInt {
    let mut d = BigInt::one();
    for q in 2..=(k + 1) {
        if crate::arith::is_prime(q) && k % (q - 1) == 0 {
            d *= BigInt::from(q);
        }
    }
    d
}

/// Herbrand pairs (p, k): even k in [2, min(k_max, p-3)] with p dividing the
/// numerator of B_k.
pub fn herbrand_pairs(p: u64, k_max: u64) -> Vec<(u64, u64)> {
    let top = k_max.min(p.saturating_sub(3));
    if top < 2 {
        return Vec::new();
    }
    let bern = bernoulli_numbers(top as usize);
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    for k in (2..=top).step_by(2) {
        if (bern[k as usize].numer() % &pb).is_zero() {
            out.push((p, k));
        }
    }
    out
}

/// B_{1,chi} = (1/f_chi) sum_{a=1}^{f_chi} chihat(a) a for the primitive
/// character chihat attached to chi, as an exact element of the cyclotomic
/// field of the character's order. B_{1,triv} = 1/2 by convention.
pub fn b1_chi(chi: &DirichletChar) -> CycloElement {
    let fx = chi.conductor;
    if fx == 1 {
        return CycloElement::from_rational(1, BigRational::new(BigInt::one(), BigInt::from(2)));
    }
    let d = chi.order_field_conductor();
    let mut s = CycloElement::zero(d);
    for a in 1..=fx {
        if let Some(val) = chi.primitive_value_root(a) {
            let term = val.scale(&BigRational::from_integer(BigInt::from(a)));
            s = s.add(&term);
        }
    }
    s.scale(&BigRational::new(BigInt::one(), BigInt::from(fx)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bernoullis() {
        let b = bernoulli_numbers(12);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(b[0], r(1, 1));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[12], r(-691, 2730));
    }

    #[test]
    fn von_staudt_clausen_holds() {
        let b = bernoulli_numbers(36);
        for k in (2..=36u64).step_by(2) {
            assert_eq!(
                b[k as usize].denom().clone(),
                von_staudt_clausen_denominator(k),
                "k={k}"
            );
        }
    }

    #[test]
    fn herbrand_examples() {
        assert_eq!(herbrand_pairs(37, 34), vec![(37, 32)]);
        assert!(herbrand_pairs(5, 2).is_empty());
        assert!(herbrand_pairs(7, 4).is_empty());
        // 691 | numerator of B_12
        assert_eq!(herbrand_pairs(691, 12), vec![(691, 12)]);
    }
}
