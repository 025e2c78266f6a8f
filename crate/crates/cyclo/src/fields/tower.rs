//! Tower bookkeeping: K_n = K(mu_{p^(n+1)}), its conductor, Galois group,
//! the ramification indices (i0, m0, n0) and the tower's cyclotomic unit.

use std::sync::Arc;

use super::abelian::AbelianField;
use super::units::FactoredUnit;
use crate::arith::{gcd, is_prime, lcm};
use crate::grouprings::Group;
use crate::{Error, Result};

/// One level of the cyclotomic tower over an abelian base field.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub base: AbelianField,
    pub p: u64,
    pub n: u32,
    /// Conductor of K_n: lcm(f_K, p^(n+1)).
    pub f_n: u64,
    /// Subgroup of (Z/f_n)^x fixing K_n.
    pub h_n: Vec<u64>,
    /// G_n = Gal(K_n/Q).
    pub group: Arc<Group>,
    pub i0: u32,
    pub m0: u32,
    pub n0: u32,
}

/// Subgroup of (Z/f_n)^x fixing K(mu_{p^(n+1)}): classes that are 1 mod
/// p^(n+1) and land in H_K mod f_K.
fn tower_subgroup(base: &AbelianField, p: u64, n: u32, f_n: u64) -> Vec<u64> {
    let pn1 = (p as u64).pow(n + 1);
    (1..=f_n)
        .filter(|&a| {
            gcd(a as u128, f_n as u128) == 1
                && a % pn1 == 1
                && (base.f == 1 || base.h.binary_search(&(a % base.f)).is_ok())
        })
        .map(|a| a % f_n)
        .collect()
}

/// Build the tower level K_n = K(mu_{p^(n+1)}).
pub fn make_tower(base: &AbelianField, p: u64, n: u32) -> Result<TowerLevel> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let pn1 = p.pow(n + 1);
    let f_n = lcm(base.f, pn1);
    let h_n = tower_subgroup(base, p, n, f_n);
    let group = Group::new(f_n, &h_n)?;

    // level-0 data for i0, m0, n0
    let f_0 = lcm(base.f, p);
    let h_0 = tower_subgroup(base, p, 0, f_0);
    let m0 = {
        let mut v = 0u32;
        let mut m = f_0;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        v - 1
    };
    // i0: largest k <= m0 with mu_{p^(k+1)} in K_0, i.e. every h in H_0
    // congruent to 1 mod p^(k+1)
    let mut i0 = 0u32;
    for k in 0..=m0 {
        let pk1 = p.pow(k + 1);
        if h_0.iter().all(|&h| h % pk1 == 1) {
            i0 = k;
        } else {
            break;
        }
    }
    let n0 = if m0 > i0 { m0 } else { 0 };
    Ok(TowerLevel {
        base: base.clone(),
        p,
        n,
        f_n,
        h_n,
        group,
        i0,
        m0,
        n0,
    })
}

impl TowerLevel {
    /// K_n as an abelian field at its true conductor f_n.
    pub fn field(&self) -> AbelianField {
        AbelianField {
            f: self.f_n,
            h: self.h_n.clone(),
        }
    }

    /// p^(n+1).
    pub fn pn1(&self) -> u64 {
        self.p.pow(self.n + 1)
    }

    /// The plus quotient G_n^+ = Gal(K_n^+/Q).
    pub fn plus_group(&self) -> Arc<Group> {
        self.group.plus_quotient()
    }

    /// Cyclotomic character value (mod p^(n+1)) of each group element:
    /// the representative reduced mod p^(n+1). Well-defined because H_n is
    /// 1 mod p^(n+1).
    pub fn chi_cyc(&self) -> Vec<u128> {
        let pn1 = self.pn1() as u128;
        self.group
            .elems
            .iter()
            .map(|&a| (a as u128) % pn1)
            .collect()
    }

    /// The tower's cyclotomic unit eps_n = eps_{K_n}^{1+c} in factored form:
    /// prod over h in H_n and -H_n of (1 - xi_{f_n}^h).
    pub fn eps_n(&self) -> FactoredUnit {
        let mut u = FactoredUnit::one(self.f_n);
        for &h in &self.h_n {
            u = u.mul(&FactoredUnit {
                f: self.f_n,
                factors: vec![(h, 1), (self.f_n - h, 1)],
            });
        }
        u
    }

    /// Projection table onto a lower level of the same tower (m >= n).
    pub fn projection_to(&self, lower: &TowerLevel) -> Result<Vec<u32>> {
        if lower.p != self.p || lower.n > self.n {
            return Err(Error::Mismatch("not a lower tower level".into()));
        }
        self.group.projection_table(&lower.group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_over_q() {
        let q = AbelianField::rationals();
        let t = make_tower(&q, 3, 0).unwrap();
        assert_eq!(t.f_n, 3);
        assert_eq!(t.group.order(), 2);
        assert_eq!(t.group.conj, t.group.class_of(2) as u32);
        assert_eq!((t.i0, t.m0, t.n0), (0, 0, 0));

        let t1 = make_tower(&q, 3, 1).unwrap();
        assert_eq!(t1.f_n, 9);
        assert_eq!(t1.group.order(), 6);
    }

    #[test]
    fn tower_over_quadratic() {
        // K = Q(sqrt 5): f0 = 15, n0 = 0 (3 does not divide 5)
        let k = AbelianField::real_quadratic(5).unwrap();
        let t = make_tower(&k, 3, 0).unwrap();
        assert_eq!(t.f_n, 15);
        assert_eq!((t.i0, t.m0, t.n0), (0, 0, 0));
        assert_eq!(t.group.order(), 4);
        assert_eq!(t.h_n, vec![1, 4]);
    }

    #[test]
    fn rejects_bad_p() {
        let q = AbelianField::rationals();
        assert!(make_tower(&q, 2, 0).is_err());
        assert!(make_tower(&q, 9, 0).is_err());
    }

    /// Ramification-analysis oracle for a field where n0 > 0: the cubic
    /// field of conductor 63 cut out by the product of cubic characters
    /// mod 9 and mod 7. Its K_0 does not contain mu_9, so i0 = 0 < m0 = 1
    /// and n0 = m0 = 1.
    #[test]
    fn entangled_cubic_has_positive_n0() {
        // H = kernel of chi = psi_9 * psi_7 inside (Z/63)^x:
        // psi_9(2^k mod 9) = zeta_3^k (2 generates (Z/9)^x),
        // psi_7(3^j mod 7) = zeta_3^j (3 generates (Z/7)^x).
        let dlog = |gen: u64, m: u64, a: u64| -> u64 {
            let mut x = 1u64;
            for k in 0..m {
                if x == a % m {
                    return k;
                }
                x = x * gen % m;
            }
            panic!("dlog");
        };
        let h: Vec<u64> = (1..63u64)
            .filter(|&a| gcd(a as u128, 63) == 1)
            .filter(|&a| {
                let k = dlog(2, 9, a % 9) % 3;
                let j = dlog(3, 7, a % 7) % 3;
                (k + j) % 3 == 0
            })
            .collect();
        assert_eq!(h.len(), 12); // degree 36/12 = 3
        let field = AbelianField::new(63, &h).unwrap();
        assert_eq!(field.degree(), 3);
        let t = make_tower(&field, 3, 0).unwrap();
        assert_eq!(t.f_n, 63);
        assert_eq!((t.i0, t.m0, t.n0), (0, 1, 1));
    }

    #[test]
    fn eps_n_for_q_is_two_factor() {
        let q = AbelianField::rationals();
        let t = make_tower(&q, 3, 0).unwrap();
        let eps = t.eps_n();
        // (1 - zeta)(1 - zeta^{-1})
        assert_eq!(eps.factors, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn eps_coherence_up_the_tower() {
        // N^m_n(eps_m) = eps_n for K = Q, p in {3, 5}, m <= 2
        for p in [3u64, 5] {
            let q = AbelianField::rationals();
            let towers: Vec<TowerLevel> =
                (0..=2).map(|n| make_tower(&q, p, n).unwrap()).collect();
            for m in 1..=2usize {
                for n in 0..m {
                    let tm = &towers[m];
                    let tn = &towers[n];
                    // Gal(K_m/K_n): classes of (Z/p^{m+1})^x congruent to
                    // 1 mod p^{n+1}
                    let reps: Vec<u64> = (1..tm.f_n)
                        .filter(|&a| gcd(a as u128, tm.f_n as u128) == 1 && a % tn.f_n == 1)
                        .collect();
                    let lhs = tm.eps_n().galois_norm(&reps).expand();
                    let rhs = tn.eps_n().embed(tm.f_n).expand();
                    assert_eq!(lhs, rhs, "p={p} m={m} n={n}");
                }
            }
        }
    }
}
