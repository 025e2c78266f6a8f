//! Stickelberger elements and ideals: the finite-sum and L-value forms of
//! theta, the equivariant Gauss-sum element, the three-ideal identity for
//! the integrality set of theta, and the image ideal with its principal
//! generator.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{gcd, invm, mulm, smallest_primitive_root, teichmuller};
use crate::classgrp::b1_chi;
use crate::fields::CycloElement;
use crate::grouprings::{
    kernel_mod, mult_matrix, CoeffRing, CycloRing, GrElem, Group, IdealLattice, Rationals, ZMod,
};
use crate::lvalues::{characters_mod, root_field_conductor, root_in_cyclo};
use crate::{Error, Result};

/// theta_r = -sum_{(a,r)=1} (a/r - 1/2) sigma_a^{-1} in Q[G(r)], the
/// finite-sum form.
pub fn theta(r: u64) -> Result<GrElem<Rationals>> {
    if r < 3 {
        return Err(Error::InvalidParam("theta needs r >= 3".into()));
    }
    let grp = Group::unit_group(r);
    let mut t = GrElem::zero(Rationals, &grp);
    for a in 1..r {
        if gcd(a as u128, r as u128) != 1 {
            continue;
        }
        let idx = grp.inv_idx(grp.class_of(a));
        let c = -(BigRational::new(BigInt::from(a), BigInt::from(r))
            - BigRational::new(BigInt::from(1), BigInt::from(2)));
        t.coeffs[idx] = &t.coeffs[idx] + &c;
    }
    Ok(t)
}

/// theta_r recomputed from truncated L-values at s=0:
/// sum_chi L_{S_r}(0, chi) e_{chi^{-1}}, evaluated exactly in cyclotomic
/// arithmetic and projected to Q[G(r)]. Every coefficient must come out
/// rational.
pub fn theta_char_side(r: u64) -> Result<GrElem<Rationals>> {
    if r < 3 {
        return Err(Error::InvalidParam("theta needs r >= 3".into()));
    }
    let grp = Group::unit_group(r);
    let chars = characters_mod(r);
    let exponent = chars
        .iter()
        .map(|c| c.order)
        .fold(1u64, |acc, o| crate::arith::lcm(acc, o));
    let big_f = root_field_conductor(exponent);
    let primes: Vec<u64> = crate::arith::factor(r).into_iter().map(|(q, _)| q).collect();
    let order = grp.order() as i64;
    let mut coeffs: Vec<CycloElement> = vec![CycloElement::zero(big_f); grp.order()];
    for chi in &chars {
        if !chi.is_odd() {
            continue; // even characters contribute 0 at s=0
        }
        // L_{S_r}(0, chi) = -B_{1, chihat} * prod_{q | r, q not | f_chi} (1 - chihat(q))
        let mut val = b1_chi(chi).neg();
        for &q in &primes {
            if chi.conductor % q == 0 {
                continue;
            }
            let factor = CycloElement::one(chi.order_field_conductor())
                .sub(&chi.primitive_value_root(q).expect("q coprime to conductor"));
            val = val.mul(&factor);
        }
        let val = val.embed(big_f);
        for (i, &b) in grp.elems.iter().enumerate() {
            let chib = chi.value_root(b).expect("b is a unit").embed(big_f);
            coeffs[i] = coeffs[i].add(&val.mul(&chib));
        }
    }
    let mut t = GrElem::zero(Rationals, &grp);
    let inv_order = BigRational::new(BigInt::from(1), BigInt::from(order));
    for (i, c) in coeffs.iter().enumerate() {
        let q = c
            .as_rational()
            .ok_or_else(|| Error::InvalidParam("character side not rational".into()))?;
        t.coeffs[i] = q * &inv_order;
    }
    Ok(t)
}

/// Both routes to theta_r; the flag records exact equality.
pub fn theta_both_ways(r: u64) -> Result<(GrElem<Rationals>, bool)> {
    let sum_form = theta(r)?;
    let char_form = theta_char_side(r)?;
    let ok = sum_form == char_form;
    Ok((sum_form, ok))
}

/// The equivariant Gauss-sum element A_r = sum_a xi_r^a sigma_{a,r} with
/// exact cyclotomic coefficients (conductor-normalized field).
pub fn gauss_element(r: u64) -> Result<GrElem<CycloRing>> {
    if r < 2 {
        return Err(Error::InvalidParam("gauss element needs r >= 2".into()));
    }
    let grp = Group::unit_group(r);
    let ring = CycloRing {
        conductor: root_field_conductor(r),
    };
    let mut out = GrElem::zero(ring, &grp);
    for a in 1..=r {
        if gcd(a as u128, r as u128) != 1 {
            continue;
        }
        let idx = grp.class_of(a % r);
        out.coeffs[idx] = out.coeffs[idx].add(&root_in_cyclo(r, a % r));
    }
    Ok(out)
}

/// The fixed topological generator: chi_cyc(g_inf) = omega(r0)(1+p) with r0
/// the smallest primitive root mod p, evaluated mod p^m_exp.
pub fn chi_g_inf(p: u64, m_exp: u32) -> u128 {
    let modulus = (p as u128).pow(m_exp);
    let r0 = smallest_primitive_root(p);
    mulm(teichmuller(r0, p, modulus), (1 + p) as u128, modulus)
}

/// Largest exponent e with p^e within u128-safe range (and at most wanted).
pub fn safe_exp(p: u64, wanted: u32) -> u32 {
    let mut e = 0u32;
    let mut acc: u128 = 1;
    while e < wanted && acc < (1u128 << 62) / p as u128 {
        acc *= p as u128;
        e += 1;
    }
    e
}

/// Integer form 2 p^(n+1) theta_n of the level-n Stickelberger element for
/// K = Q (coefficient p^(n+1) - 2a at sigma_a^{-1}).
fn theta_doubled_int(p: u64, n: u32, ring: &ZMod) -> GrElem<ZMod> {
    let pn1 = p.pow(n + 1);
    let grp = Group::unit_group(pn1);
    let mut t = GrElem::zero(ring.clone(), &grp);
    for a in 1..pn1 {
        if a % p == 0 {
            continue;
        }
        let idx = grp.inv_idx(grp.class_of(a));
        let c = ring.reduce_i(pn1 as i128 - 2 * a as i128);
        t.coeffs[idx] = ring.add(&t.coeffs[idx], &c);
    }
    t
}

/// Generators of <sigma_a - a : (a, 2p) = 1> in Z/p^M[G_n], with the
/// p^(n+1) scalar the ideal contains.
fn mu_annihilator_gens(p: u64, n: u32, ring: &ZMod, grp: &Arc<Group>) -> Vec<GrElem<ZMod>> {
    let pn1 = p.pow(n + 1);
    let mut gens = Vec::new();
    for a in 1..=(2 * pn1) {
        if gcd(a as u128, (2 * p) as u128) != 1 {
            continue;
        }
        let mut e = GrElem::basis(ring.clone(), grp, grp.class_of(a % pn1));
        e.coeffs[0] = ring.sub(&e.coeffs[0], &(a as u128 % ring.modulus));
        gens.push(e);
    }
    let mut pn = GrElem::one(ring.clone(), grp);
    pn.coeffs[0] = (pn1 as u128) % ring.modulus;
    gens.push(pn);
    gens
}

/// {y : theta_n y integral} as a lattice mod p^m_exp: preimage of the
/// kernel of multiplication by 2 p^(n+1) theta_n mod p^(n+1).
fn theta_integrality_set(p: u64, n: u32, ring: &ZMod) -> IdealLattice {
    let pn1_ring = ZMod::new(p, n + 1);
    let theta2 = theta_doubled_int(p, n, &pn1_ring);
    let grp = Arc::clone(&theta2.grp);
    let d = grp.order();
    let m = mult_matrix(&theta2);
    let kern = kernel_mod(&pn1_ring, &m, d);
    let mut rows: Vec<Vec<u128>> = kern
        .into_iter()
        .map(|r| r.iter().map(|&x| x % ring.modulus).collect())
        .collect();
    let pn1 = (p as u128).pow(n + 1);
    for i in 0..d {
        let mut r = vec![0u128; d];
        r[i] = pn1 % ring.modulus;
        rows.push(r);
    }
    IdealLattice::from_rows(ring, &grp, rows, 0)
}

/// Report of the three-ideal identity at (p, n).
#[derive(Debug, serde::Serialize)]
pub struct ThreeIdealReport {
    pub p: u64,
    pub n: u32,
    pub m_exp: u32,
    pub chi_cyc_g_inf: String,
    pub eq_1_2: bool,
    pub eq_2_3: bool,
    pub eq_1_3: bool,
    pub index_exp: u32,
}

impl ThreeIdealReport {
    pub fn all_equal(&self) -> bool {
        self.eq_1_2 && self.eq_2_3 && self.eq_1_3
    }
}

/// Build the three lattices mod p^(n+3) (guard 2) and compare pairwise:
/// (1) the ideal (g_n - chi_cyc(g_inf)),
/// (2) <sigma_a - a : (a, 2p) = 1>,
/// (3) {y : theta_n y integral}.
pub fn three_ideal_lemma_check(p: u64, n: u32) -> Result<ThreeIdealReport> {
    let m_exp = n + 3;
    let ring = ZMod::new(p, m_exp);
    let pn1 = p.pow(n + 1);
    let grp = Group::unit_group(pn1);

    let chi = chi_g_inf(p, safe_exp(p, m_exp + 40));
    let chi_m = chi % ring.modulus;
    let gn_rep = (chi % pn1 as u128) as u64;
    let mut gen1 = GrElem::basis(ring.clone(), &grp, grp.class_of(gn_rep));
    gen1.coeffs[0] = ring.sub(&gen1.coeffs[0], &chi_m);
    let l1 = IdealLattice::span(&ring, &grp, &[gen1], true)?;

    let gens2 = mu_annihilator_gens(p, n, &ring, &grp);
    let l2 = IdealLattice::span(&ring, &grp, &gens2, true)?;

    let l3 = theta_integrality_set(p, n, &ring);

    Ok(ThreeIdealReport {
        p,
        n,
        m_exp,
        chi_cyc_g_inf: chi_m.to_string(),
        eq_1_2: l1.eq_at(&l2, m_exp),
        eq_2_3: l2.eq_at(&l3, m_exp),
        eq_1_3: l1.eq_at(&l3, m_exp),
        index_exp: l1.index_exp(),
    })
}

/// Multiply a lattice's G-closed basis by theta_n (dividing the doubled
/// integer form by 2 p^(n+1)); rows must satisfy the integrality.
fn multiply_by_theta(p: u64, n: u32, l: &IdealLattice, out_ring: &ZMod) -> Result<IdealLattice> {
    let work = ZMod::new(p, out_ring.m_exp + n + 1);
    let theta2 = theta_doubled_int(p, n, &work);
    let pn1 = (p as u128).pow(n + 1);
    let inv2 = invm(2, work.modulus);
    let mut rows = Vec::new();
    for b in l.basis_elems() {
        for t in 0..l.grp.order() {
            let y = GrElem {
                ring: work.clone(),
                grp: Arc::clone(&l.grp),
                coeffs: b
                    .translate(t)
                    .coeffs
                    .iter()
                    .map(|&x| x % work.modulus)
                    .collect(),
            };
            let prod = theta2.mul(&y);
            let mut row = Vec::with_capacity(l.grp.order());
            for c in &prod.coeffs {
                if c % pn1 != 0 {
                    return Err(Error::Precision(
                        "theta multiple not integral at working precision".into(),
                    ));
                }
                row.push(mulm(c / pn1, inv2, work.modulus) % out_ring.modulus);
            }
            rows.push(row);
        }
    }
    Ok(IdealLattice::from_rows(out_ring, &l.grp, rows, 0))
}

/// theta-tilde_n = (g_n - chi_cyc(g_inf)) theta_n, integral by the
/// three-ideal identity, mod p^m_exp.
pub fn theta_tilde(p: u64, n: u32, m_exp: u32) -> Result<GrElem<ZMod>> {
    let ring = ZMod::new(p, m_exp);
    let work = ZMod::new(p, m_exp + n + 1);
    let pn1 = p.pow(n + 1);
    let grp = Group::unit_group(pn1);
    let chi = chi_g_inf(p, safe_exp(p, m_exp + n + 41));
    let gn_rep = (chi % pn1 as u128) as u64;
    let mut gen = GrElem::basis(work.clone(), &grp, grp.class_of(gn_rep));
    gen.coeffs[0] = work.sub(&gen.coeffs[0], &(chi % work.modulus));
    let theta2 = theta_doubled_int(p, n, &work);
    let prod = theta2.mul(&gen);
    let inv2 = invm(2, work.modulus);
    let mut out = GrElem::zero(ring.clone(), &grp);
    for (i, c) in prod.coeffs.iter().enumerate() {
        if c % (pn1 as u128) != 0 {
            return Err(Error::Precision("theta-tilde not integral".into()));
        }
        out.coeffs[i] = mulm(c / pn1 as u128, inv2, work.modulus) % ring.modulus;
    }
    Ok(out)
}

/// Report for the image-ideal identity chain at (p, n, M).
#[derive(Debug, serde::Serialize)]
pub struct FsnReport {
    pub p: u64,
    pub n: u32,
    pub m_exp: u32,
    pub chi_cyc_g_inf: String,
    pub formula_equals_principal: bool,
    pub formula_equals_stickelberger: bool,
    pub is_ideal: bool,
    pub contained_in_minus: bool,
    /// exponent e with |Z_p[G_n]^- : S_n| = p^e at this precision
    pub minus_index_exp: u32,
}

/// S_n = theta_n {y : theta_n y integral} mod p^m_exp (K = Q), together
/// with the principal-generation and Stickelberger-span identities.
pub fn fs_via_formula(p: u64, n: u32, m_exp: u32) -> Result<(IdealLattice, FsnReport)> {
    if m_exp < n + 2 {
        return Err(Error::Precision("need M >= n+2".into()));
    }
    let ring = ZMod::new(p, m_exp);
    let set_ring = ZMod::new(p, m_exp + n + 1);
    let integrality = theta_integrality_set(p, n, &set_ring);
    let fsn = multiply_by_theta(p, n, &integrality, &ring)?;

    let tt = theta_tilde(p, n, m_exp)?;
    let tt_grp = Arc::clone(&tt.grp);
    let principal = IdealLattice::span(&ring, &tt_grp, &[tt], true)?;

    let st = stickelberger_ideal(p.pow(n + 1), p, m_exp)?;

    let grp = Arc::clone(&fsn.grp);
    let minus_ambient = {
        let gens: Vec<GrElem<ZMod>> = (0..grp.order())
            .map(|i| GrElem::basis(ring.clone(), &grp, i).e_minus())
            .collect();
        IdealLattice::span(&ring, &grp, &gens, false)?
    };
    let contained = fsn.basis_elems().iter().all(|b| minus_ambient.contains(b));
    let minus_index_exp = if contained {
        fsn.index_exp() - minus_ambient.index_exp()
    } else {
        0
    };
    let report = FsnReport {
        p,
        n,
        m_exp,
        chi_cyc_g_inf: (chi_g_inf(p, safe_exp(p, m_exp)) % ring.modulus).to_string(),
        formula_equals_principal: fsn.eq_at(&principal, m_exp),
        formula_equals_stickelberger: fsn.eq_at(&st, m_exp),
        is_ideal: fsn.is_g_stable(),
        contained_in_minus: contained,
        minus_index_exp,
    };
    Ok((fsn, report))
}

/// Z/p^M-span of the classical Stickelberger ideal of Q(mu_r), r = p^(n+1):
/// theta times the annihilator of the roots of unity.
pub fn stickelberger_ideal(r: u64, p: u64, m_exp: u32) -> Result<IdealLattice> {
    let fac = crate::arith::factor(r);
    if fac.len() != 1 || fac[0].0 != p {
        return Err(Error::Unsupported(
            "Stickelberger ideal implemented for r = p^(n+1) only".into(),
        ));
    }
    let n = fac[0].1 - 1;
    let ring = ZMod::new(p, m_exp);
    let work = ZMod::new(p, m_exp + n + 1);
    let grp = Group::unit_group(r);
    let gens = mu_annihilator_gens(p, n, &work, &grp);
    let ann = IdealLattice::span(&work, &grp, &gens, true)?;
    multiply_by_theta(p, n, &ann, &ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn theta_small_values() {
        let t = theta(3).unwrap();
        assert_eq!(t.coeffs[t.grp.class_of(1)], rat(1, 6));
        assert_eq!(t.coeffs[t.grp.class_of(2)], rat(-1, 6));
        let t = theta(4).unwrap();
        assert_eq!(t.coeffs[t.grp.class_of(1)], rat(1, 4));
        assert_eq!(t.coeffs[t.grp.class_of(3)], rat(-1, 4));
        assert!(theta(2).is_err());
    }

    #[test]
    fn theta_is_minus_part() {
        for r in [3u64, 4, 5, 9, 12, 15] {
            let t = theta(r).unwrap();
            assert_eq!(t.conj(), t.neg(), "c theta = -theta for r={r}");
        }
    }

    #[test]
    fn theta_dual_formula_small() {
        for r in 3..=20u64 {
            if r % 4 == 2 {
                continue; // conductor rep: G(r) = G(r/2), covered there
            }
            let (_, ok) = theta_both_ways(r).unwrap();
            assert!(ok, "r={r}");
        }
    }

    #[test]
    fn theta_coherence_under_projection() {
        for (p, i, j) in [(3u64, 1u32, 0u32), (5, 1, 0)] {
            let ti = theta(p.pow(i + 1)).unwrap();
            let tj = theta(p.pow(j + 1)).unwrap();
            let proj = ti.project(&tj.grp).unwrap();
            assert_eq!(proj, tj);
        }
    }

    #[test]
    fn gauss_element_small() {
        let a = gauss_element(2).unwrap();
        assert_eq!(a.grp.order(), 1);
        assert_eq!(a.coeffs[0], CycloElement::one(1).neg());
        let a = gauss_element(3).unwrap();
        assert_eq!(a.coeffs[a.grp.class_of(1)], CycloElement::root_of_unity(3, 1));
        assert_eq!(a.coeffs[a.grp.class_of(2)], CycloElement::root_of_unity(3, 2));
    }

    #[test]
    fn three_ideal_small_cases() {
        let r = three_ideal_lemma_check(3, 0).unwrap();
        assert!(r.all_equal(), "{r:?}");
        assert_eq!(r.index_exp, 1, "index 3 in Z/27[G_0] ... v_3(chi^2-1) = 1");
        let r = three_ideal_lemma_check(5, 0).unwrap();
        assert!(r.all_equal(), "{r:?}");
    }

    /// Brute-force oracle at p=3, n=0: the integrality set is
    /// {a + b s : a = b mod 3}.
    #[test]
    fn three_ideal_brute_force_oracle() {
        let ring = ZMod::new(3, 2);
        let l3 = theta_integrality_set(3, 0, &ring);
        for a in 0..9u128 {
            for b in 0..9u128 {
                let e = GrElem {
                    ring: ring.clone(),
                    grp: Arc::clone(&l3.grp),
                    coeffs: vec![a, b],
                };
                let expected = (a % 3) == (b % 3);
                assert_eq!(l3.contains(&e), expected, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn fsn_at_p3_n0_is_full_minus_part() {
        let (fsn, rep) = fs_via_formula(3, 0, 4).unwrap();
        assert!(rep.formula_equals_principal, "{rep:?}");
        assert!(rep.formula_equals_stickelberger, "{rep:?}");
        assert!(rep.is_ideal && rep.contained_in_minus);
        assert_eq!(rep.minus_index_exp, 0, "S_0 is the full minus part");
        // theta-tilde spans the same ideal as (1 - sigma_2)/2
        let ring = ZMod::new(3, 4);
        let grp = Group::unit_group(3);
        let gen = GrElem::one(ring.clone(), &grp)
            .sub(&GrElem::basis(ring.clone(), &grp, grp.class_of(2)));
        let half = gen.scale(&invm(2, ring.modulus));
        let minus = IdealLattice::span(&ring, &grp, &[half], true).unwrap();
        assert!(fsn.eq_at(&minus, 4));
    }

    #[test]
    fn stickelberger_ideal_cross_check() {
        let (fsn, rep) = fs_via_formula(3, 1, 4).unwrap();
        assert!(rep.formula_equals_stickelberger);
        let st = stickelberger_ideal(9, 3, 4).unwrap();
        assert!(fsn.eq_at(&st, 4));
        assert!(stickelberger_ideal(12, 3, 4).is_err());
        for b in st.basis_elems() {
            assert!(b.e_plus().is_zero(), "minus-part containment");
        }
    }
}
