//! Dirichlet characters with exact root-of-unity values and complex
//! evaluation in double-double precision.

use super::dd::Cdd;
use crate::arith::{euler_phi, factor, gcd, smallest_primitive_root};
use crate::fields::CycloElement;

/// xi_d^k as an exact element of Q(mu_D) with D the valid conductor for
/// order-d roots (D = d unless d = 2 mod 4, where D = d/2).
pub fn root_in_cyclo(d: u64, k: u64) -> CycloElement {
    let k = k % d;
    if d % 4 == 2 {
        let m = d / 2; // odd
        // xi_d = -xi_m^((m+1)/2)
        let e = (k * ((m + 1) / 2)) % m;
        let base = CycloElement::root_of_unity(m.max(1), e as i64);
        if k % 2 == 1 {
            base.neg()
        } else {
            base
        }
    } else {
        CycloElement::root_of_unity(d, k as i64)
    }
}

/// Conductor of the cyclotomic field generated by order-d roots of unity.
pub fn root_field_conductor(d: u64) -> u64 {
    if d % 4 == 2 {
        d / 2
    } else {
        d
    }
}

/// Generators (gen, order) of (Z/f)^x by CRT over prime powers.
fn unit_group_generators(f: u64) -> Vec<(u64, u64)> {
    if f <= 2 {
        return vec![];
    }
    let mut gens = Vec::new();
    for (q, e) in factor(f) {
        let qe = q.pow(e);
        let rest = f / qe;
        // CRT lift: x = g mod q^e, x = 1 mod rest
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % f;
            }
            let (_, a, b) = crate::arith::extgcd(qe as i128, rest as i128);
            // x = g * (rest * b) + 1 * (qe * a) mod f
            let rb = (rest as i128 * b).rem_euclid(f as i128) as u64;
            let qa = (qe as i128 * a).rem_euclid(f as i128) as u64;
            ((g as u128 * rb as u128 + qa as u128) % f as u128) as u64
        };
        if q == 2 {
            match e {
                1 => {}
                2 => gens.push((lift(3), 2)),
                _ => {
                    gens.push((lift(qe - 1), 2));
                    gens.push((lift(5), qe / 4));
                }
            }
        } else {
            // primitive root mod q^e
            let mut g = smallest_primitive_root(q);
            if e > 1 {
                let ord = euler_phi(qe);
                if crate::arith::mult_order(g, qe) != ord {
                    g += q;
                }
                debug_assert_eq!(crate::arith::mult_order(g, qe), ord);
            }
            gens.push((lift(g), euler_phi(qe)));
        }
    }
    gens
}

/// A Dirichlet character mod f, with values xi_L^(exps[a]) where L is the
/// exponent of (Z/f)^x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletChar {
    pub modulus: u64,
    /// Exponent of (Z/f)^x: all values are L-th roots of unity.
    pub exponent_l: u64,
    /// exps[a] = k with chi(a) = xi_L^k, None when gcd(a, f) > 1.
    pub exps: Vec<Option<u64>>,
    /// Order of the character.
    pub order: u64,
    /// Conductor of the primitive character inducing this one.
    pub conductor: u64,
}

/// All phi(f) characters mod f, deterministic order.
pub fn characters_mod(f: u64) -> Vec<DirichletChar> {
    let gens = unit_group_generators(f);
    let l = gens.iter().fold(1u64, |acc, &(_, o)| crate::arith::lcm(acc, o));
    // element list and discrete logs w.r.t. the generator tuple
    let units: Vec<u64> = if f == 1 {
        vec![0]
    } else {
        (1..f.max(2)).filter(|&a| gcd(a as u128, f as u128) == 1).collect()
    };
    // enumerate group elements as products of generator powers
    let mut dlogs: std::collections::HashMap<u64, Vec<u64>> = std::collections::HashMap::new();
    let mut stack: Vec<(u64, Vec<u64>)> = vec![(if f == 1 { 0 } else { 1 }, vec![0; gens.len()])];
    dlogs.insert(if f == 1 { 0 } else { 1 }, vec![0; gens.len()]);
    while let Some((x, e)) = stack.pop() {
        for (i, &(g, o)) in gens.iter().enumerate() {
            let y = x * g % f;
            if !dlogs.contains_key(&y) {
                let mut e2 = e.clone();
                e2[i] = (e2[i] + 1) % o;
                dlogs.insert(y, e2.clone());
                stack.push((y, e2));
            }
        }
    }
    debug_assert_eq!(dlogs.len(), units.len());

    // all exponent tuples
    let mut tuples: Vec<Vec<u64>> = vec![vec![]];
    for &(_, o) in &gens {
        let mut next = Vec::new();
        for t in &tuples {
            for k in 0..o {
                let mut t2 = t.clone();
                t2.push(k);
                next.push(t2);
            }
        }
        tuples = next;
    }

    tuples
        .into_iter()
        .map(|t| {
            let mut exps: Vec<Option<u64>> = vec![None; f.max(1) as usize];
            for &a in &units {
                let e = &dlogs[&a];
                let mut v = 0u64;
                for (i, &(_, o)) in gens.iter().enumerate() {
                    v = (v + t[i] * e[i] % o * (l / o)) % l;
                }
                exps[a as usize % f.max(1) as usize] = Some(v);
            }
            let mut chi = DirichletChar {
                modulus: f,
                exponent_l: l,
                exps,
                order: 1,
                conductor: 1,
            };
            chi.order = chi.compute_order();
            chi.conductor = chi.compute_conductor();
            chi
        })
        .collect()
}

impl DirichletChar {
    fn compute_order(&self) -> u64 {
        let mut g = self.exponent_l;
        for e in self.exps.iter().flatten() {
            g = gcd(g as u128, *e as u128) as u64;
            if g == 1 {
                break;
            }
        }
        self.exponent_l / g.max(1)
    }

    fn compute_conductor(&self) -> u64 {
        'outer: for f0 in crate::arith::divisors(self.modulus) {
            for (a, e) in self.exps.iter().enumerate() {
                if let Some(v) = e {
                    let in_kernel = if f0 == 1 { true } else { a as u64 % f0 == 1 };
                    if in_kernel && *v != 0 {
                        continue 'outer;
                    }
                }
            }
            return f0;
        }
        self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn is_odd(&self) -> bool {
        if self.modulus <= 2 {
            return false;
        }
        let v = self.exps[(self.modulus - 1) as usize].expect("-1 is a unit");
        v != 0 && 2 * v == self.exponent_l
    }

    /// Exponent k with chi(a) = xi_L^k, None on non-units.
    pub fn value_exp(&self, a: u64) -> Option<u64> {
        self.exps[(a % self.modulus.max(1)) as usize]
    }

    /// chi(a) as an exact cyclotomic number (0 for non-units).
    pub fn value_root(&self, a: u64) -> Option<CycloElement> {
        self.value_exp(a).map(|v| {
            // value is an order-d root: v is a multiple of L/d
            let d = self.order;
            let k = v / (self.exponent_l / d);
            root_in_cyclo(d, k)
        })
    }

    /// Conductor of the field containing the character values.
    pub fn order_field_conductor(&self) -> u64 {
        root_field_conductor(self.order)
    }

    /// Value of the primitive character at a (requires gcd(a, conductor)=1):
    /// lift a to a unit mod the modulus congruent to a mod the conductor.
    pub fn primitive_value_exp(&self, a: u64) -> Option<u64> {
        let fx = self.conductor;
        if fx == 1 {
            return Some(0);
        }
        if gcd(a as u128 % fx as u128, fx as u128) != 1 {
            return None;
        }
        let mut t = a % fx;
        while gcd(t as u128, self.modulus as u128) != 1 {
            t += fx;
        }
        self.value_exp(t)
    }

    /// chi(a) as complex double-double (0 for non-units).
    pub fn value_cdd(&self, a: u64) -> Cdd {
        match self.value_exp(a) {
            Some(v) => Cdd::root_of_unity(v as i64, self.exponent_l as i64),
            None => Cdd::ZERO,
        }
    }

    pub fn primitive_value_cdd(&self, a: u64) -> Cdd {
        match self.primitive_value_exp(a) {
            Some(v) => Cdd::root_of_unity(v as i64, self.exponent_l as i64),
            None => Cdd::ZERO,
        }
    }

    pub fn primitive_value_root(&self, a: u64) -> Option<CycloElement> {
        self.primitive_value_exp(a).map(|v| {
            let d = self.order;
            let k = v / (self.exponent_l / d);
            root_in_cyclo(d, k)
        })
    }

    /// chi^k.
    pub fn pow(&self, k: u64) -> DirichletChar {
        let exps: Vec<Option<u64>> = self
            .exps
            .iter()
            .map(|e| e.map(|v| (v as u128 * k as u128 % self.exponent_l as u128) as u64))
            .collect();
        let mut chi = DirichletChar {
            modulus: self.modulus,
            exponent_l: self.exponent_l,
            exps,
            order: 1,
            conductor: 1,
        };
        chi.order = chi.compute_order();
        chi.conductor = chi.compute_conductor();
        chi
    }

    pub fn inverse(&self) -> DirichletChar {
        self.pow(self.order - 1 + u64::from(self.order == 1))
    }

    /// Trivial on the subgroup h (i.e. a character of (Z/f)^x / H)?
    pub fn trivial_on(&self, h: &[u64]) -> bool {
        h.iter().all(|&a| self.value_exp(a) == Some(0) || (self.modulus == 1))
    }
}

/// Gauss sum tau(chi_hat) of the primitive character, in Cdd.
pub fn gauss_sum(chi: &DirichletChar) -> Cdd {
    let fx = chi.conductor;
    let mut s = Cdd::ZERO;
    for a in 1..=fx {
        if gcd(a as u128, fx as u128) != 1 {
            continue;
        }
        if let Some(v) = chi.primitive_value_exp(a) {
            let term = Cdd::root_of_unity(v as i64, chi.exponent_l as i64)
                .mul(Cdd::root_of_unity(a as i64, fx as i64));
            s = s.add(term);
        }
    }
    s
}
