//! Abelian fields as fixed fields of subgroups of (Z/f)^x, stored at their
//! true conductor.

use std::sync::Arc;

use crate::arith::{euler_phi, gcd, kronecker};
use crate::grouprings::Group;
use crate::{Error, Result};

/// The fixed field of H <= (Z/f)^x inside Q(mu_f), with f the true conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianField {
    pub f: u64,
    /// Sorted element list of H.
    pub h: Vec<u64>,
}

/// Close a set of units mod f under multiplication.
pub fn subgroup_closure(f: u64, gens: &[u64]) -> Vec<u64> {
    let id = if f == 1 { 0 } else { 1 };
    let mut set: Vec<u64> = vec![id];
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = if f == 1 { 0 } else { x * (g % f) % f };
            if !set.contains(&y) {
                set.push(y);
                frontier.push(y);
            }
        }
    }
    set.sort_unstable();
    set
}

/// True conductor of the fixed field of `h` inside Q(mu_f): the smallest
/// divisor f0 of f such that h contains the kernel of (Z/f)^x -> (Z/f0)^x.
pub fn true_conductor(f: u64, h: &[u64]) -> u64 {
    'outer: for f0 in crate::arith::divisors(f) {
        if f0 % 4 == 2 {
            continue; // conductors are never 2 mod 4
        }
        for a in 1..=f {
            if gcd(a as u128, f as u128) == 1 {
                let in_kernel = if f0 == 1 { true } else { a % f0 == 1 };
                if in_kernel && h.binary_search(&(a % f)).is_err() && !(f == 1 && a == 1) {
                    continue 'outer;
                }
            }
        }
        return f0;
    }
    f
}

impl AbelianField {
    /// Construct, requiring f to be the true conductor of (f, H).
    pub fn new(f: u64, h_elems: &[u64]) -> Result<AbelianField> {
        if f == 0 || f % 4 == 2 {
            return Err(Error::InvalidField(format!("invalid conductor {f}")));
        }
        let h = subgroup_closure(f, h_elems);
        // closure of the provided elements must equal the provided set if it
        // was already closed; either way we work with the closure
        for &a in &h {
            if f > 1 && gcd(a as u128, f as u128) != 1 {
                return Err(Error::InvalidField(format!("{a} not a unit mod {f}")));
            }
        }
        let cond = true_conductor(f, &h);
        if cond != f {
            return Err(Error::InvalidField(format!(
                "conductor of (f={f}, H) is {cond}, not {f}"
            )));
        }
        Ok(AbelianField { f, h })
    }

    /// Construct the fixed field, reducing to the true conductor.
    pub fn fixed_field(f: u64, h_elems: &[u64]) -> AbelianField {
        let h = subgroup_closure(f, h_elems);
        let cond = true_conductor(f, &h);
        if cond == f {
            return AbelianField { f, h };
        }
        // push the subgroup down: image of H plus kernel of reduction
        let mut h2: Vec<u64> = h.iter().map(|&a| if cond == 1 { 0 } else { a % cond }).collect();
        h2.sort_unstable();
        h2.dedup();
        AbelianField {
            f: cond,
            h: subgroup_closure(cond, &h2),
        }
    }

    /// The rational field Q.
    pub fn rationals() -> AbelianField {
        AbelianField { f: 1, h: vec![0] }
    }

    /// Q(mu_f); f must be 1 or not 2 mod 4.
    pub fn cyclotomic(f: u64) -> Result<AbelianField> {
        if f == 1 {
            return Ok(AbelianField::rationals());
        }
        AbelianField::new(f, &[1])
    }

    /// The maximal real subfield Q(mu_f)^+.
    pub fn max_real_cyclotomic(f: u64) -> Result<AbelianField> {
        if f <= 4 {
            // Q(mu_3)^+ = Q(mu_4)^+ = Q
            return Ok(AbelianField::rationals());
        }
        AbelianField::new(f, &[1, f - 1])
    }

    /// Real quadratic field of fundamental discriminant delta > 0:
    /// conductor delta, H = kernel of the Kronecker character.
    pub fn real_quadratic(delta: u64) -> Result<AbelianField> {
        if !is_fundamental_discriminant(delta as i64) || delta < 5 {
            return Err(Error::InvalidField(format!(
                "{delta} is not a fundamental discriminant > 1"
            )));
        }
        let h: Vec<u64> = (1..delta)
            .filter(|&a| gcd(a as u128, delta as u128) == 1 && kronecker(delta as i64, a as i64) == 1)
            .collect();
        AbelianField::new(delta, &h)
    }

    pub fn degree(&self) -> u64 {
        if self.f == 1 {
            1
        } else {
            euler_phi(self.f) / self.h.len() as u64
        }
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// Real iff complex conjugation (-1) lies in H.
    pub fn is_real(&self) -> bool {
        self.f <= 2 || self.h.binary_search(&(self.f - 1)).is_ok()
    }

    /// Galois group Gal(F/Q) = (Z/f)^x / H.
    pub fn galois_group(&self) -> Arc<Group> {
        Group::new(self.f, &self.h).expect("field subgroup is valid")
    }

    /// Lift H to a subgroup of (Z/f2)^x for f | f2 (full preimage).
    pub fn lift_subgroup(&self, f2: u64) -> Vec<u64> {
        assert!(f2 % self.f == 0);
        (1..=f2)
            .filter(|&a| {
                gcd(a as u128, f2 as u128) == 1
                    && (self.f == 1 || self.h.binary_search(&(a % self.f)).is_ok())
            })
            .map(|a| a % f2)
            .collect()
    }

    /// Whether self is a subfield of `other`.
    pub fn is_subfield_of(&self, other: &AbelianField) -> bool {
        if other.f % self.f != 0 {
            return false;
        }
        let lifted = self.lift_subgroup(other.f);
        other.h.iter().all(|a| lifted.binary_search(a).is_ok())
    }
}

/// All subgroups of (Z/f)^x (element lists, sorted), by BFS closure.
pub fn all_subgroups(f: u64) -> Vec<Vec<u64>> {
    let units: Vec<u64> = if f == 1 {
        vec![0]
    } else {
        (1..f).filter(|&a| gcd(a as u128, f as u128) == 1).collect()
    };
    let id = if f == 1 { 0 } else { 1 };
    let mut subs: Vec<Vec<u64>> = vec![vec![id]];
    let mut i = 0;
    while i < subs.len() {
        let current = subs[i].clone();
        for &u in &units {
            if current.binary_search(&u).is_err() {
                let mut gens = current.clone();
                gens.push(u);
                let closure = subgroup_closure(f, &gens);
                if !subs.contains(&closure) {
                    subs.push(closure);
                }
            }
        }
        i += 1;
    }
    subs.sort();
    subs
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d <= 1 {
        return false;
    }
    let squarefree = |n: i64| -> bool {
        let mut m = n;
        let mut k = 2i64;
        while k * k <= m {
            if m % (k * k) == 0 {
                return false;
            }
            if m % k == 0 {
                m /= k;
            }
            k += 1;
        }
        true
    };
    if d % 4 == 1 {
        squarefree(d)
    } else if d % 4 == 0 {
        let m = d / 4;
        (m % 4 == 2 || m % 4 == 3) && squarefree(m)
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductor_exactness() {
        // H = full group mod 9 fixes Q: conductor 1, so new() must reject
        assert!(AbelianField::new(9, &[2]).is_err());
        let q = AbelianField::fixed_field(9, &[2]);
        assert!(q.is_rationals());
        // Q(mu_9)+ has conductor 9
        let real9 = AbelianField::max_real_cyclotomic(9).unwrap();
        assert_eq!(real9.degree(), 3);
        assert!(real9.is_real());
    }

    #[test]
    fn quadratic_fields() {
        let k5 = AbelianField::real_quadratic(5).unwrap();
        assert_eq!(k5.degree(), 2);
        assert_eq!(k5.h, vec![1, 4]);
        assert!(k5.is_real());
        let k8 = AbelianField::real_quadratic(8).unwrap();
        assert_eq!(k8.degree(), 2);
        assert!(AbelianField::real_quadratic(12).is_ok());
        assert!(AbelianField::real_quadratic(9).is_err());
        assert!(AbelianField::real_quadratic(20).is_err());
    }

    #[test]
    fn subfield_relation() {
        let q5 = AbelianField::cyclotomic(5).unwrap();
        let q15 = AbelianField::cyclotomic(15).unwrap();
        let k5 = AbelianField::real_quadratic(5).unwrap();
        assert!(q5.is_subfield_of(&q15));
        assert!(k5.is_subfield_of(&q5));
        assert!(!q15.is_subfield_of(&q5));
        assert!(AbelianField::rationals().is_subfield_of(&k5));
    }

    #[test]
    fn subgroup_enumeration() {
        // (Z/5)^x is cyclic of order 4: subgroups 1, 2, 4 -> 3 subgroups
        assert_eq!(all_subgroups(5).len(), 3);
        // (Z/8)^x = C2 x C2: 5 subgroups
        assert_eq!(all_subgroups(8).len(), 5);
        // (Z/15)^x = C2 x C4: subgroups: 1 + 3 + (order4: cyclic C4 x1? ...)
        let subs = all_subgroups(15);
        // orders must divide 8
        assert!(subs.iter().all(|s| 8 % s.len() == 0));
        assert!(subs.iter().any(|s| s.len() == 8));
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [5i64, 8, 12, 13, 229, 316, 321] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [1i64, 4, 9, 16, 18, 25, 20, 45] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }
}
