//! Teichmueller-character idempotents of Z/p^M[G_0] for G_0 of order p-1.

use std::sync::Arc;

use crate::arith::{invm, mulm, teichmuller};
use crate::{Error, Result};

use super::group::Group;
use super::ring::{GrElem, ZMod};

/// The idempotents e_j, j = 0..p-2, of Z/p^M[G_0] attached to the powers of
/// the Teichmueller character: e_j = (1/|G_0|) sum_g omega^j(g) g^{-1}.
///
/// `grp` must be the level-0 Galois group (Z/p)^x (or a quotient of it whose
/// order divides p-1; omega is evaluated on representatives).
pub fn idempotents_ej(grp: &Arc<Group>, p: u64, m_exp: u32) -> Result<Vec<GrElem<ZMod>>> {
    if m_exp < 1 {
        return Err(Error::Precision("idempotents need M >= 1".into()));
    }
    let order = grp.order() as u64;
    if (p - 1) % order != 0 {
        return Err(Error::InvalidParam(format!(
            "group order {order} does not divide p-1 = {}",
            p - 1
        )));
    }
    let ring = ZMod::new(p, m_exp);
    let inv_order = invm(order as u128, ring.modulus);
    // omega on each class, via the Teichmueller lift of the representative
    let omega: Vec<u128> = grp
        .elems
        .iter()
        .map(|&a| teichmuller(a % p, p, ring.modulus))
        .collect();
    let count = p - 1;
    let mut out = Vec::with_capacity(count as usize);
    for j in 0..count {
        let mut e = GrElem::zero(ring.clone(), grp);
        for (i, w) in omega.iter().enumerate() {
            let wj = crate::arith::powm(*w, j as u128, ring.modulus);
            let gi = grp.inv_idx(i);
            e.coeffs[gi] = (e.coeffs[gi] + mulm(wj, inv_order, ring.modulus)) % ring.modulus;
        }
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_idempotents_match_hand_values() {
        // p=3: e0 = (1+s2)/2, e1 = (1-s2)/2 with 1/2 = 5 mod 9 at M=2
        let grp = Group::unit_group(3);
        let ejs = idempotents_ej(&grp, 3, 2).unwrap();
        assert_eq!(ejs.len(), 2);
        let s2 = grp.class_of(2);
        assert_eq!(ejs[0].coeffs[0], 5);
        assert_eq!(ejs[0].coeffs[s2], 5);
        assert_eq!(ejs[1].coeffs[0], 5);
        assert_eq!(ejs[1].coeffs[s2], 4); // -5 mod 9
    }

    #[test]
    fn partition_of_unity_and_orthogonality() {
        for (p, m) in [(3u64, 4u32), (5, 6), (7, 4)] {
            let grp = Group::unit_group(p);
            let ring = ZMod::new(p, m);
            let ejs = idempotents_ej(&grp, p, m).unwrap();
            let mut sum = GrElem::zero(ring.clone(), &grp);
            for e in &ejs {
                sum = sum.add(e);
                assert_eq!(e.mul(e), *e, "idempotent");
            }
            assert_eq!(sum, GrElem::one(ring.clone(), &grp), "sum e_j = 1");
            for (j, ej) in ejs.iter().enumerate() {
                for (k, ek) in ejs.iter().enumerate() {
                    if j != k {
                        assert!(ej.mul(ek).is_zero(), "e_j e_k = 0");
                    }
                }
            }
            // eigenvector property: g e_j = omega^j(g) e_j
            for (j, ej) in ejs.iter().enumerate() {
                for (i, &a) in grp.elems.iter().enumerate() {
                    let lhs = ej.translate(i);
                    let w = teichmuller(a % p, p, ring.modulus);
                    let wj = crate::arith::powm(w, j as u128, ring.modulus);
                    assert_eq!(lhs, ej.scale(&wj));
                }
            }
        }
    }
}
