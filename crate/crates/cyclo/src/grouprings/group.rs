//! Finite abelian Galois groups presented as (Z/f)^x / H.
//!
//! Elements are cosets, stored by their least positive representative. The
//! multiplication table is precomputed; groups here have at most a few
//! hundred elements.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::{euler_phi, gcd};
use crate::{Error, Result};

/// A finite abelian group (Z/f)^x / H with full tables.
#[derive(Debug)]
pub struct Group {
    /// Modulus f of the ambient unit group.
    pub modulus: u64,
    /// The subgroup H, as a sorted list of its elements in (Z/f)^x.
    pub subgroup: Vec<u64>,
    /// Least coset representatives, sorted; `elems[0]` is the identity.
    pub elems: Vec<u64>,
    rep_of: HashMap<u64, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    /// Index of the class of -1 (complex conjugation).
    pub conj: u32,
}

impl Group {
    /// Build (Z/f)^x / H. `subgroup` must contain 1 and be closed under
    /// multiplication mod f.
    pub fn new(modulus: u64, subgroup: &[u64]) -> Result<Arc<Group>> {
        if modulus == 0 {
            return Err(Error::InvalidField("modulus 0".into()));
        }
        let id = if modulus == 1 { 0 } else { 1 };
        let mut h: Vec<u64> = subgroup.iter().map(|&a| a % modulus).collect();
        if h.is_empty() {
            h.push(id);
        }
        h.sort_unstable();
        h.dedup();
        for &a in &h {
            if modulus > 1 && gcd(a as u128, modulus as u128) != 1 {
                return Err(Error::InvalidField(format!(
                    "{a} is not a unit mod {modulus}"
                )));
            }
        }
        if !h.contains(&id) {
            return Err(Error::InvalidField("subgroup does not contain 1".into()));
        }
        // closure check
        for &a in &h {
            for &b in &h {
                let ab = if modulus == 1 { 0 } else { a * b % modulus };
                if h.binary_search(&ab).is_err() {
                    return Err(Error::InvalidField(format!(
                        "subgroup not closed: {a}*{b} mod {modulus}"
                    )));
                }
            }
        }

        // partition units into cosets
        let units: Vec<u64> = if modulus == 1 {
            vec![0]
        } else {
            (1..modulus)
                .filter(|&a| gcd(a as u128, modulus as u128) == 1)
                .collect()
        };
        if units.len() as u64 % h.len() as u64 != 0 {
            return Err(Error::InvalidField("subgroup order does not divide phi(f)".into()));
        }
        let mut rep_of: HashMap<u64, u32> = HashMap::new();
        let mut elems: Vec<u64> = Vec::new();
        for &a in &units {
            if rep_of.contains_key(&a) {
                continue;
            }
            // least representative of the coset aH
            let mut coset: Vec<u64> = h
                .iter()
                .map(|&s| if modulus == 1 { 0 } else { a * s % modulus })
                .collect();
            coset.sort_unstable();
            let rep = coset[0];
            let k = elems.len() as u32;
            elems.push(rep);
            for c in coset {
                rep_of.insert(c, k);
            }
        }
        // sort elems for determinism, rebuild map indices
        let mut sorted = elems.clone();
        sorted.sort_unstable();
        let mut remap: HashMap<u64, u32> = HashMap::new();
        for (i, &r) in sorted.iter().enumerate() {
            remap.insert(r, i as u32);
        }
        let mut rep_of2 = HashMap::new();
        for (unit, old) in rep_of {
            rep_of2.insert(unit, remap[&elems[old as usize]]);
        }
        let elems = sorted;
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = if modulus == 1 {
                    0
                } else {
                    elems[i] * elems[j] % modulus
                };
                mul[i * n + j] = rep_of2[&prod];
            }
        }
        let mut inv = vec![0u32; n];
        let id_idx = rep_of2[&id];
        for i in 0..n {
            for j in 0..n {
                if mul[i * n + j] == id_idx {
                    inv[i] = j as u32;
                    break;
                }
            }
        }
        let conj = if modulus <= 2 {
            id_idx
        } else {
            rep_of2[&(modulus - 1)]
        };
        debug_assert_eq!(id_idx, 0, "identity should sort first");
        Ok(Arc::new(Group {
            modulus,
            subgroup: h,
            elems,
            rep_of: rep_of2,
            mul,
            inv,
            conj,
        }))
    }

    /// The full unit group (Z/f)^x.
    pub fn unit_group(modulus: u64) -> Arc<Group> {
        let id = if modulus == 1 { 0 } else { 1 };
        Group::new(modulus, &[id]).expect("trivial subgroup is valid")
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.elems.len() + j] as usize
    }

    #[inline]
    pub fn inv_idx(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    /// Index of the class of unit `a` (a coprime to modulus).
    pub fn class_of(&self, a: u64) -> usize {
        let r = if self.modulus == 1 { 0 } else { a % self.modulus };
        *self
            .rep_of
            .get(&r)
            .unwrap_or_else(|| panic!("{a} is not a unit mod {}", self.modulus)) as usize
    }

    pub fn is_identity(&self, i: usize) -> bool {
        i == 0
    }

    /// True if the class of -1 is trivial (the field is totally real).
    pub fn conj_is_trivial(&self) -> bool {
        self.conj == 0
    }

    /// Whether `a` (coprime to the modulus) lies in H, i.e. is trivial here.
    pub fn is_trivial_class(&self, a: u64) -> bool {
        self.class_of(a) == 0
    }

    /// The quotient G -> G/<c> onto the plus group (same modulus, subgroup
    /// enlarged by -1). Identity when c is already trivial.
    pub fn plus_quotient(self: &Arc<Group>) -> Arc<Group> {
        if self.conj_is_trivial() {
            return Arc::clone(self);
        }
        let mut h = self.subgroup.clone();
        let m = self.modulus;
        for s in self.subgroup.clone() {
            h.push((m - 1) * s % m);
        }
        Group::new(m, &h).expect("plus quotient is a valid group")
    }

    /// Check that `target` is a quotient of `self`: target.modulus divides
    /// self.modulus and H maps into H_target.
    pub fn projects_onto(&self, target: &Group) -> bool {
        if target.modulus == 0 || self.modulus % target.modulus != 0 {
            return false;
        }
        self.subgroup.iter().all(|&s| {
            let r = if target.modulus == 1 { 0 } else { s % target.modulus };
            target.subgroup.binary_search(&r).is_ok()
                || target.rep_of.get(&r).map(|&i| i == 0).unwrap_or(false)
        })
    }

    /// The projection map self -> target as an index table.
    pub fn projection_table(&self, target: &Group) -> Result<Vec<u32>> {
        if !self.projects_onto(target) {
            return Err(Error::Mismatch(format!(
                "no projection from mod-{} group to mod-{} group",
                self.modulus, target.modulus
            )));
        }
        Ok(self
            .elems
            .iter()
            .map(|&a| {
                let r = if target.modulus == 1 { 0 } else { a % target.modulus };
                target.rep_of[&r] as u32
            })
            .collect())
    }

    /// phi(f)/|H|, the order again (sanity helper).
    pub fn expected_order(&self) -> u64 {
        if self.modulus == 1 {
            1
        } else {
            euler_phi(self.modulus) / self.subgroup.len() as u64
        }
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.subgroup == other.subgroup
    }
}
impl Eq for Group {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_of_9() {
        let g = Group::unit_group(9);
        assert_eq!(g.order(), 6);
        assert_eq!(g.elems, vec![1, 2, 4, 5, 7, 8]);
        let two = g.class_of(2);
        let four = g.class_of(4);
        assert_eq!(g.mul_idx(two, two), four);
        assert_eq!(g.conj, g.class_of(8) as u32);
    }

    #[test]
    fn quotient_by_pm1() {
        let g = Group::unit_group(15);
        assert_eq!(g.order(), 8);
        let plus = g.plus_quotient();
        assert_eq!(plus.order(), 4);
        assert!(plus.conj_is_trivial());
        let t = g.projection_table(&plus).unwrap();
        assert_eq!(t.len(), 8);
        // 14 = -1 maps to identity
        assert_eq!(t[g.class_of(14)], 0);
    }

    #[test]
    fn trivial_modulus() {
        let g = Group::unit_group(1);
        assert_eq!(g.order(), 1);
        assert!(g.conj_is_trivial());
    }

    #[test]
    fn group_axioms_random() {
        let g = Group::unit_group(35);
        let n = g.order();
        for i in 0..n {
            assert_eq!(g.mul_idx(i, g.inv_idx(i)), 0);
            for j in 0..n {
                assert_eq!(g.mul_idx(i, j), g.mul_idx(j, i));
                for k in [0, 3 % n, 7 % n] {
                    assert_eq!(
                        g.mul_idx(g.mul_idx(i, j), k),
                        g.mul_idx(i, g.mul_idx(j, k))
                    );
                }
            }
        }
    }
}
