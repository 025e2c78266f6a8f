//! Form class groups of real quadratic fields: primitive indefinite binary
//! quadratic forms of fundamental discriminant D > 0, equivalence via
//! reduction cycles, composition via united forms.
//!
//! This is the narrow class group; for odd p its p-part agrees with the
//! p-part of the usual class group (they differ by a 2-group), which is all
//! the annihilation tests consume.

use std::collections::HashMap;

use crate::arith::{extgcd, isqrt};
use crate::fields::is_fundamental_discriminant;
use crate::{Error, Result};

/// ax^2 + bxy + cy^2 with b^2 - 4ac = D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        let g = crate::arith::gcd(
            crate::arith::gcd(self.a.unsigned_abs() as u128, self.b.unsigned_abs() as u128),
            self.c.unsigned_abs() as u128,
        );
        g == 1
    }

    pub fn value(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

/// x < sqrt(d) for nonsquare d > 0.
fn lt_sqrt(x: i64, d: i64) -> bool {
    x < 0 || (x as i128) * (x as i128) < d as i128
}

/// Reduced indefinite form: |sqrt(D) - 2|a|| < b < sqrt(D).
pub fn is_reduced(f: &QuadForm, d: i64) -> bool {
    if f.b <= 0 || !lt_sqrt(f.b, d) {
        return false;
    }
    let t = 2 * f.a.abs() - f.b;
    // -b < sqrt(D) - 2|a| < b  <=>  t < sqrt(D) and sqrt(D) < b + 2|a|
    lt_sqrt(t, d) && !lt_sqrt(f.b + 2 * f.a.abs(), d)
}

/// One reduction step rho: (a,b,c) -> (c, r, (r^2-D)/4c) with r = -b mod 2|c|
/// chosen in the window (sqrt(D) - 2|c|, sqrt(D)).
pub fn rho(f: &QuadForm, d: i64) -> QuadForm {
    let c = f.c;
    let two_c = 2 * c.abs();
    let s = isqrt(d as u128) as i64;
    // r = -b mod 2|c|, shifted into (s - 2|c|, s]
    let mut r = (-f.b).rem_euclid(two_c);
    // maximal representative <= s (since sqrt(D) irrational, window is (.., s])
    if r > s {
        r -= two_c * ((r - s + two_c - 1) / two_c);
    } else {
        r += two_c * ((s - r) / two_c);
    }
    let new_c = ((r as i128 * r as i128 - d as i128) / (4 * c as i128)) as i64;
    QuadForm { a: c, b: r, c: new_c }
}

/// Reduce a form to its cycle (returns a reduced representative).
pub fn reduce(f: &QuadForm, d: i64) -> QuadForm {
    let mut g = *f;
    for _ in 0..10_000 {
        if is_reduced(&g, d) {
            return g;
        }
        g = rho(&g, d);
    }
    panic!("reduction did not terminate for {f:?}");
}

/// All primitive reduced forms of discriminant d.
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let s = isqrt(d as u128) as i64;
    let mut out = Vec::new();
    for b in 1..=s {
        if (d - b * b) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4; // negative
        for a in 1..=s {
            for sign in [1i64, -1] {
                let aa = a * sign;
                if ac % aa == 0 {
                    let f = QuadForm {
                        a: aa,
                        b,
                        c: ac / aa,
                    };
                    if f.is_primitive() && is_reduced(&f, d) {
                        out.push(f);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The principal form (1, b0, c0) reduced.
pub fn principal_form(d: i64) -> QuadForm {
    let b0 = if d % 2 == 0 { 0 } else { 1 };
    reduce(
        &QuadForm {
            a: 1,
            b: b0,
            c: (b0 * b0 - d) / 4,
        },
        d,
    )
}

/// Composition of primitive forms of the same discriminant, by moving the
/// second form to a representative with leading coefficient coprime to the
/// first (united forms) and gluing with a common middle coefficient.
pub fn compose(f1: &QuadForm, f2: &QuadForm, d: i64) -> QuadForm {
    // find (x, y) with gcd(f2(x,y), 2 * a1 * d) = 1
    let target = {
        let mut t = 2i128 * f1.a as i128 * d as i128;
        if t < 0 {
            t = -t;
        }
        t
    };
    let mut found: Option<(i64, i64)> = None;
    'search: for bound in 1..200i64 {
        for x in -bound..=bound {
            for y in -bound..=bound {
                if x.abs().max(y.abs()) != bound && bound > 1 {
                    continue;
                }
                if crate::arith::extgcd(x as i128, y as i128).0 != 1 {
                    continue;
                }
                let v = f2.value(x, y) as i128;
                if v != 0 && crate::arith::gcd(v.unsigned_abs(), target.unsigned_abs()) == 1 {
                    found = Some((x, y));
                    break 'search;
                }
            }
        }
    }
    let (x, y) = found.expect("primitive form represents values coprime to any modulus");
    // transform f2 by an SL2 matrix with first column (x, y)
    let (_, u, v) = extgcd(x as i128, y as i128);
    // det [[x, -v],[y, u]] = xu + vy = 1
    let (m11, m12, m21, m22) = (x as i128, -(v), y as i128, u);
    let a2 = f2.value(m11 as i64, m21 as i64);
    let bb = 2 * f2.a as i128 * m11 * m12
        + f2.b as i128 * (m11 * m22 + m12 * m21)
        + 2 * f2.c as i128 * m21 * m22;
    let c2 = f2.value(m12 as i64, m22 as i64);
    let g2 = QuadForm {
        a: a2,
        b: bb as i64,
        c: c2,
    };
    debug_assert_eq!(g2.disc(), d);

    // united: leading coefficients are coprime, so the CRT below glues
    let a1 = f1.a as i128;
    let a2 = g2.a as i128;
    debug_assert_eq!(
        crate::arith::gcd(a1.unsigned_abs(), a2.unsigned_abs()),
        1
    );
    // find B with B = b1 mod 2a1, B = b2 mod 2a2, B^2 = D mod 4 a1 a2:
    // since gcd(2a1, 2a2) | (b1 - b2) (both = D mod 2), CRT on 2a1, 2a2
    let b1 = f1.b as i128;
    let b2 = g2.b as i128;
    let m1 = 2 * a1;
    let m2 = 2 * a2;
    let (g, s, _) = extgcd(m1, m2);
    debug_assert_eq!((b2 - b1) % g, 0);
    let lcm = m1 / g * m2;
    let mut big_b = b1 + m1 * ((b2 - b1) / g % (m2 / g) * s % (m2 / g));
    big_b = big_b.rem_euclid(lcm);
    debug_assert_eq!((big_b - b1) % m1, 0);
    debug_assert_eq!((big_b - b2) % m2, 0);
    let a3 = a1 * a2;
    let c3 = (big_b * big_b - d as i128) / (4 * a3);
    debug_assert_eq!((big_b * big_b - d as i128) % (4 * a3), 0);
    let f3 = QuadForm {
        a: a3 as i64,
        b: big_b as i64,
        c: c3 as i64,
    };
    debug_assert_eq!(f3.disc(), d);
    reduce(&f3, d)
}

/// Inverse class: (a, -b, c).
pub fn inverse_form(f: &QuadForm, d: i64) -> QuadForm {
    reduce(
        &QuadForm {
            a: f.a,
            b: -f.b,
            c: f.c,
        },
        d,
    )
}

/// The narrow form class group of a fundamental discriminant D > 0, with
/// full composition table on canonical cycle representatives.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub disc: i64,
    /// Canonical representative (minimal form) of each cycle; index 0 is the
    /// principal class.
    pub classes: Vec<QuadForm>,
    /// cycle_of[form] = class index, for every reduced form.
    cycle_of: HashMap<QuadForm, usize>,
    /// Composition table.
    pub table: Vec<Vec<usize>>,
    /// Invariant factors (elementary divisors) of the group.
    pub invariants: Vec<u64>,
}

impl FormClassGroup {
    pub fn new(disc: i64) -> Result<FormClassGroup> {
        if !is_fundamental_discriminant(disc) {
            return Err(Error::InvalidField(format!(
                "{disc} is not a fundamental discriminant"
            )));
        }
        let all = reduced_forms(disc);
        // partition into rho-cycles
        let mut cycle_of: HashMap<QuadForm, usize> = HashMap::new();
        let mut reps: Vec<QuadForm> = Vec::new();
        for &f in &all {
            if cycle_of.contains_key(&f) {
                continue;
            }
            let idx = reps.len();
            let mut cyc = vec![f];
            let mut g = rho(&f, disc);
            let mut guard = 0;
            while g != f {
                cyc.push(g);
                g = rho(&g, disc);
                guard += 1;
                assert!(guard < 100_000, "cycle did not close");
            }
            let min = *cyc.iter().min().unwrap();
            reps.push(min);
            for c in cyc {
                cycle_of.insert(c, idx);
            }
        }
        // identity first
        let principal = principal_form(disc);
        let pidx = cycle_of[&principal];
        reps.swap(0, pidx);
        let mut remap: HashMap<usize, usize> = HashMap::new();
        remap.insert(pidx, 0);
        remap.insert(0, pidx);
        for v in cycle_of.values_mut() {
            if let Some(&nv) = remap.get(v) {
                *v = nv;
            }
        }
        // sort non-identity classes for determinism
        let mut order: Vec<usize> = (1..reps.len()).collect();
        order.sort_by_key(|&i| reps[i]);
        let mut new_reps = vec![reps[0]];
        let mut final_map: HashMap<usize, usize> = HashMap::new();
        final_map.insert(0, 0);
        for (new_idx, &old_idx) in order.iter().enumerate() {
            final_map.insert(old_idx, new_idx + 1);
            new_reps.push(reps[old_idx]);
        }
        for v in cycle_of.values_mut() {
            *v = final_map[v];
        }
        let reps = new_reps;

        let h = reps.len();
        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in i..h {
                let fr = compose(&reps[i], &reps[j], disc);
                let k = cycle_of[&fr];
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        let invariants = abelian_invariants(&table);
        Ok(FormClassGroup {
            disc,
            classes: reps,
            cycle_of,
            table,
            invariants,
        })
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, f: &QuadForm) -> usize {
        self.cycle_of[&reduce(f, self.disc)]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn pow(&self, i: usize, mut e: u64) -> usize {
        let mut acc = 0usize;
        let mut base = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.mul(i, j) == 0).unwrap()
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = 1u64;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// The Galois action of the nontrivial automorphism: class inversion.
    pub fn galois(&self, i: usize) -> usize {
        self.inv(i)
    }

    /// Generators of the p-Sylow subgroup: m-th powers of all elements,
    /// m = |Cl| / p^(v_p |Cl|).
    pub fn p_part_generators(&self, p: u64) -> Vec<usize> {
        let h = self.order() as u64;
        let mut m = h;
        while m % p == 0 {
            m /= p;
        }
        let mut gens: Vec<usize> = (0..self.order())
            .map(|i| self.pow(i, m))
            .filter(|&i| i != 0)
            .collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// |p-part|.
    pub fn p_part_order(&self, p: u64) -> u64 {
        let mut h = self.order() as u64;
        let mut s = 1;
        while h % p == 0 {
            h /= p;
            s *= p;
        }
        s
    }
}

/// Invariant factors of a finite abelian group given by its multiplication
/// table, from the order statistics |G[m]|.
fn abelian_invariants(table: &[Vec<usize>]) -> Vec<u64> {
    let n = table.len() as u64;
    if n == 1 {
        return vec![];
    }
    let pow = |i: usize, mut e: u64| -> usize {
        let mut acc = 0usize;
        let mut base = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = table[acc][base];
            }
            base = table[base][base];
            e >>= 1;
        }
        acc
    };
    // per prime, partition lambda from counts of G[p^k]
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    for (p, _) in crate::arith::factor(n) {
        let mut counts = vec![1u64]; // |G[p^0]|
        let mut k = 1u32;
        loop {
            let c = (0..table.len()).filter(|&i| pow(i, p.pow(k)) == 0).count() as u64;
            let stabilized = c == counts[counts.len() - 1];
            counts.push(c);
            if stabilized || p.pow(k) > n {
                break;
            }
            k += 1;
        }
        // lambda_j (number of cyclic factors of order >= p^j) =
        // log_p(|G[p^j]| / |G[p^(j-1)]|)
        let mut lambda: Vec<u64> = Vec::new();
        for j in 1..counts.len() {
            let ratio = counts[j] / counts[j - 1];
            if ratio == 1 {
                break;
            }
            let mut e = 0u64;
            let mut r = ratio;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            lambda.push(e);
        }
        // cyclic factor exponents: transpose of the partition
        let mut exps: Vec<u64> = Vec::new();
        let max_parts = lambda.first().copied().unwrap_or(0);
        for slot in 0..max_parts {
            let e = lambda.iter().filter(|&&l| l > slot).count() as u64;
            exps.push(e);
        }
        per_prime.push(exps.iter().map(|&e| p.pow(e as u32)).collect());
    }
    // merge per-prime cyclic orders into invariant factors (largest first)
    let max_len = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut inv: Vec<u64> = Vec::new();
    for i in 0..max_len {
        let mut m = 1u64;
        for pp in &per_prime {
            if i < pp.len() {
                m *= pp[i];
            }
        }
        inv.push(m);
    }
    inv.sort_unstable();
    inv
}

/// Independent count of classes: every ideal class contains an ideal of
/// norm below the Minkowski bound sqrt(D)/2, i.e. every form class has a
/// representative with |a| <= sqrt(D)/2. Used as the enumeration oracle.
pub fn class_count_via_small_norms(d: i64) -> usize {
    let bound = (isqrt(d as u128) / 2) as i64 + 1;
    let mut seen: Vec<QuadForm> = Vec::new();
    for a in 1..=bound {
        for sa in [1i64, -1] {
            let aa = a * sa;
            for b in 0..(2 * a) {
                let num = b * b - d;
                if num % (4 * aa) != 0 {
                    continue;
                }
                let f = QuadForm {
                    a: aa,
                    b,
                    c: num / (4 * aa),
                };
                if f.disc() == d && f.is_primitive() {
                    let r = reduce(&f, d);
                    // collect the whole cycle's minimum as class key
                    let mut min = r;
                    let mut g = rho(&r, d);
                    while g != r {
                        if g < min {
                            min = g;
                        }
                        g = rho(&g, d);
                    }
                    if !seen.contains(&min) {
                        seen.push(min);
                    }
                }
            }
        }
    }
    seen.len()
}
