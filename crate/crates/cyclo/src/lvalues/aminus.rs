//! The minus-part element built from L-values at s=1, its exact algebraic
//! form in the tower case, and the equivariant functional equation relating
//! it to Gauss-sum-weighted Stickelberger elements.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::chars::{characters_mod, DirichletChar};
use super::dd::{Cdd, Dd};
use super::lfun::{l1_primitive_series, s_factor_at_1};
use super::{cyclo_to_cdd, root_field_conductor};
use crate::fields::{AbelianField, CycloElement, TowerLevel};
use crate::grouprings::{CycloRing, GrElem, Group, Rationals};
use crate::par::par_map;
use crate::stick::{gauss_element, theta};
use crate::{Error, Result};

/// Character side: a^- = (i/pi) sum_{chi odd} L_S(1, chi) e_{chi^{-1}},
/// as a complex coefficient vector over Gal(F/Q); S = primes dividing f_F.
pub fn a_minus_char_side(field: &AbelianField) -> Result<Vec<Cdd>> {
    if field.is_real() {
        return Err(Error::Unsupported("a^- needs an imaginary field".into()));
    }
    let grp = field.galois_group();
    let s_primes: Vec<u64> = crate::arith::factor(field.f).into_iter().map(|(q, _)| q).collect();
    let odd: Vec<DirichletChar> = characters_mod(field.f)
        .into_iter()
        .filter(|c| c.is_odd() && c.trivial_on(&field.h))
        .collect();
    // L_S(1, chi) for each odd character (the dominant evaluation), in
    // parallel when enabled
    let values: Vec<Cdd> = par_map(&odd, |chi| {
        let l1 = l1_primitive_series(chi).expect("odd chi is non-principal");
        l1.mul(s_factor_at_1(chi, &s_primes))
    });
    let order = grp.order();
    let inv_pi = Cdd::I.scale(Dd::ONE.div(Dd::PI));
    let mut out = vec![Cdd::ZERO; order];
    for (b_idx, &b) in grp.elems.iter().enumerate() {
        let mut s = Cdd::ZERO;
        for (chi, l) in odd.iter().zip(&values) {
            s = s.add(l.mul(chi.value_cdd(b)));
        }
        out[b_idx] = inv_pi
            .mul(s)
            .scale(Dd::ONE.div(Dd::from_f64(order as f64)));
    }
    Ok(out)
}

/// Algebraic side for F = K_n:
/// a^- = (1/2f_n)(1-c) sum_g g(Tr_{Q(mu_fn)/K_n}(xi/(1-xi))) g^{-1},
/// exact cyclotomic coefficients over G_n.
pub fn a_minus_algebraic(tower: &TowerLevel) -> Result<Vec<CycloElement>> {
    let f = tower.f_n;
    let xi = CycloElement::root_of_unity(f, 1);
    let w = xi.mul(&CycloElement::one(f).sub(&xi).inverse()?);
    // middle trace over H_n
    let mut tr = CycloElement::zero(f);
    for &h in &tower.h_n {
        tr = tr.add(&w.galois(h));
    }
    let grp = &tower.group;
    let n = grp.order();
    let mut v = vec![CycloElement::zero(f); n];
    for (i, &g) in grp.elems.iter().enumerate() {
        v[grp.inv_idx(i)] = tr.galois(g);
    }
    // (1 - c)/(2 f_n)
    let conj = grp.conj as usize;
    let scale = BigRational::new(BigInt::from(1), BigInt::from(2 * f));
    let mut out = vec![CycloElement::zero(f); n];
    for i in 0..n {
        let shifted = v[grp.mul_idx(conj, i)].clone();
        out[i] = v[i].sub(&shifted).scale(&scale);
    }
    Ok(out)
}

/// Compare the two forms of a^- for F = K_n; returns the max coefficient
/// residual, and asserts the minus-part property on both sides.
pub fn a_minus_check(tower: &TowerLevel) -> Result<f64> {
    let field = tower.field();
    let char_side = a_minus_char_side(&field)?;
    let alg_side = a_minus_algebraic(tower)?;
    let grp = &tower.group;
    let mut resid: f64 = 0.0;
    for i in 0..grp.order() {
        let alg = cyclo_to_cdd(&alg_side[i]);
        resid = resid.max(alg.sub(char_side[i]).abs());
    }
    // c a = -a on the character side
    let conj = grp.conj as usize;
    for i in 0..grp.order() {
        let c_act = char_side[grp.mul_idx(conj, i)];
        resid = resid.max(c_act.add(char_side[i]).abs());
    }
    Ok(resid)
}

/// Restriction compatibility: a^-(K_n) is the image of a^-(Q(mu_fn)) under
/// the coefficient-summing restriction map. Returns the residual.
pub fn a_minus_restriction_residual(tower: &TowerLevel) -> Result<f64> {
    let big = AbelianField::cyclotomic(tower.f_n)?;
    let big_grp = big.galois_group();
    let side_big = a_minus_char_side(&big)?;
    let side_small = a_minus_char_side(&tower.field())?;
    let table = big_grp.projection_table(&tower.group)?;
    let mut projected = vec![Cdd::ZERO; tower.group.order()];
    for (i, &t) in table.iter().enumerate() {
        projected[t as usize] = projected[t as usize].add(side_big[i]);
    }
    let mut resid: f64 = 0.0;
    for i in 0..tower.group.order() {
        resid = resid.max(projected[i].sub(side_small[i]).abs());
    }
    Ok(resid)
}

/// Exact right-hand side of the equivariant functional equation:
/// (1/l) sum_{r | l, r != 1} cores(A_r theta_r), with coefficients in the
/// conductor field of l.
pub fn efe_rhs_exact(l: u64) -> Result<GrElem<CycloRing>> {
    let big_f = root_field_conductor(l);
    let gl = Group::unit_group(l);
    let ring = CycloRing { conductor: big_f };
    let mut acc = GrElem::zero(ring.clone(), &gl);
    for r in crate::arith::divisors(l) {
        if r == 1 {
            continue;
        }
        let a_r = gauss_element(r)?;
        let theta_r: GrElem<Rationals> = theta_for_efe(r)?;
        // A_r * theta_r with cyclotomic coefficients at conductor big_f
        let gr = Arc::clone(&a_r.grp);
        let mut prod = GrElem::zero(ring.clone(), &gr);
        for (i, c) in a_r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, q) in theta_r.coeffs.iter().enumerate() {
                if q == &BigRational::from_integer(0.into()) {
                    continue;
                }
                let k = gr.mul_idx(i, j);
                let term = c.embed(big_f).scale(q);
                prod.coeffs[k] = prod.coeffs[k].add(&term);
            }
        }
        let up = prod.cores_to(&gl)?;
        acc = acc.add(&up);
    }
    let scale = BigRational::new(BigInt::from(1), BigInt::from(l));
    Ok(GrElem {
        ring: acc.ring.clone(),
        grp: Arc::clone(&acc.grp),
        coeffs: acc.coeffs.iter().map(|c| c.scale(&scale)).collect(),
    })
}

/// theta_r for the functional equation, allowing r = 2 (where it vanishes).
fn theta_for_efe(r: u64) -> Result<GrElem<Rationals>> {
    if r == 2 {
        let grp = Group::unit_group(2);
        return Ok(GrElem::zero(Rationals, &grp));
    }
    theta(r)
}

/// The equivariant functional equation check at level l: compares the
/// star of the character side against the exact Gauss-sum side, both
/// embedded in C. Returns the max coefficient residual.
pub fn equivariant_fe_check(l: u64) -> Result<f64> {
    if l < 3 {
        return Err(Error::InvalidParam("need l >= 3".into()));
    }
    let field = AbelianField::cyclotomic(l)?;
    let lhs = a_minus_char_side(&field)?; // a^-; still needs the star
    let grp = field.galois_group();
    let rhs = efe_rhs_exact(l)?;
    let mut resid: f64 = 0.0;
    for i in 0..grp.order() {
        // coefficient of g in a^{-,*} is the coefficient of g^{-1} in a^-
        let lhs_star = lhs[grp.inv_idx(i)];
        let r = cyclo_to_cdd(&rhs.coeffs[i]);
        resid = resid.max(lhs_star.sub(r).abs());
    }
    Ok(resid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;

    #[test]
    fn a_minus_two_forms_agree_small() {
        // F = Q(mu_3) = K_0 over Q at p=3
        let q = AbelianField::rationals();
        let t = make_tower(&q, 3, 0).unwrap();
        let resid = a_minus_check(&t).unwrap();
        assert!(resid < 1e-12, "residual {resid:e}");
        // F = Q(mu_5) = K_0 over Q at p=5
        let t = make_tower(&q, 5, 0).unwrap();
        let resid = a_minus_check(&t).unwrap();
        assert!(resid < 1e-12, "residual {resid:e}");
    }

    #[test]
    fn a_minus_plus_projection_vanishes() {
        let q = AbelianField::rationals();
        let t = make_tower(&q, 5, 0).unwrap();
        let side = a_minus_char_side(&t.field()).unwrap();
        let grp = &t.group;
        let conj = grp.conj as usize;
        for i in 0..grp.order() {
            let e_plus = side[i].add(side[grp.mul_idx(conj, i)]);
            assert!(e_plus.abs() < 1e-20);
        }
    }

    #[test]
    fn a_minus_rejects_real_fields() {
        let k5 = AbelianField::real_quadratic(5).unwrap();
        assert!(a_minus_char_side(&k5).is_err());
    }

    #[test]
    fn restriction_compatibility() {
        // K = Q(sqrt 5), p = 3: K_0 inside Q(mu_15)
        let k = AbelianField::real_quadratic(5).unwrap();
        let t = make_tower(&k, 3, 0).unwrap();
        let resid = a_minus_restriction_residual(&t).unwrap();
        assert!(resid < 1e-10, "residual {resid:e}");
    }

    #[test]
    fn efe_small_levels() {
        for l in [3u64, 4, 12] {
            let resid = equivariant_fe_check(l).unwrap();
            assert!(resid < 1e-10, "l={l}: residual {resid:e}");
        }
    }

    #[test]
    fn cores_of_gauss_element_character_formula() {
        // chi(cores(A_r)) = (phi(l)/phi(r)) prod_{q in T} (-chihat(q)) tau(chihat)
        // for r = f_chi prod_{q in T} q, else 0. Checked at l=12, r=4.
        let l = 12u64;
        let gl = Group::unit_group(l);
        let a4 = gauss_element(4).unwrap();
        // embed coefficients into Q(mu_12) and corestrict
        let ring = CycloRing { conductor: 12 };
        let mut a4_big = GrElem::zero(ring, &a4.grp);
        for (i, c) in a4.coeffs.iter().enumerate() {
            a4_big.coeffs[i] = c.embed(12);
        }
        let up = a4_big.cores_to(&gl).unwrap();
        for chi in characters_mod(12).into_iter().filter(|c| c.is_odd()) {
            // chi(x) = sum_b coeff_b chi(b)
            let mut val = Cdd::ZERO;
            for (i, &b) in gl.elems.iter().enumerate() {
                val = val.add(cyclo_to_cdd(&up.coeffs[i]).mul(chi.value_cdd(b)));
            }
            if chi.conductor == 4 {
                // T empty: expect (phi(12)/phi(4)) tau(chihat) = 2 tau
                let want = super::super::chars::gauss_sum(&chi).scale(Dd::from_f64(2.0));
                assert!(val.sub(want).abs() < 1e-20);
            } else {
                // conductor 3: 4 is not of the form 3 * squarefree-part
                assert!(val.abs() < 1e-20);
            }
        }
    }
}
