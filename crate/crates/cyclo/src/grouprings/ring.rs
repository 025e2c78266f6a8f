//! Group-ring elements over a closed family of coefficient rings.
//!
//! The coefficient rings are sealed: exact rationals, Z/p^M (which also
//! serves as p-adics at declared precision, tracked by the caller), and
//! exact cyclotomic numbers. No other ring can be plugged in.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{invm, mulm};
use crate::fields::CycloElement;
use crate::grouprings::Group;

mod sealed {
    pub trait Sealed {}
}

/// A coefficient ring for group-ring elements. Sealed.
pub trait CoeffRing: sealed::Sealed + Clone + PartialEq + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiply by the inverse of 2 (valid in all three rings for odd p).
    fn halve(&self, a: &Self::Elem) -> Self::Elem;
}

/// Exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Rationals;
impl sealed::Sealed for Rationals {}
impl CoeffRing for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn halve(&self, a: &BigRational) -> BigRational {
        a / BigRational::from_integer(2.into())
    }
}

/// Z/p^M with modulus stored explicitly; doubles as p-adics at precision M.
#[derive(Clone, Debug, PartialEq)]
pub struct ZMod {
    pub p: u64,
    pub m_exp: u32,
    pub modulus: u128,
}

impl ZMod {
    pub fn new(p: u64, m_exp: u32) -> ZMod {
        assert!(m_exp >= 1);
        let modulus = (p as u128).pow(m_exp);
        assert!(modulus < (1 << 63), "modulus too large for u128 arithmetic");
        ZMod { p, m_exp, modulus }
    }
    pub fn reduce_i(&self, x: i128) -> u128 {
        x.rem_euclid(self.modulus as i128) as u128
    }
    pub fn inv(&self, a: u128) -> u128 {
        invm(a, self.modulus)
    }
    /// p-adic valuation, capped at m_exp for 0.
    pub fn val(&self, a: u128) -> u32 {
        crate::arith::val_p(a % self.modulus, self.p, self.m_exp)
    }
}

impl sealed::Sealed for ZMod {}
impl CoeffRing for ZMod {
    type Elem = u128;
    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        1 % self.modulus
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        (a + b) % self.modulus
    }
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        mulm(*a, *b, self.modulus)
    }
    fn neg(&self, a: &u128) -> u128 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn is_zero(&self, a: &u128) -> bool {
        a % self.modulus == 0
    }
    fn halve(&self, a: &u128) -> u128 {
        mulm(*a, self.inv(2), self.modulus)
    }
}

/// Exact cyclotomic coefficients in Q(mu_f).
#[derive(Clone, Debug, PartialEq)]
pub struct CycloRing {
    pub conductor: u64,
}
impl sealed::Sealed for CycloRing {}
impl CoeffRing for CycloRing {
    type Elem = CycloElement;
    fn zero(&self) -> CycloElement {
        CycloElement::zero(self.conductor)
    }
    fn one(&self) -> CycloElement {
        CycloElement::one(self.conductor)
    }
    fn add(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a.add(b)
    }
    fn sub(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a.sub(b)
    }
    fn mul(&self, a: &CycloElement, b: &CycloElement) -> CycloElement {
        a.mul(b)
    }
    fn neg(&self, a: &CycloElement) -> CycloElement {
        a.neg()
    }
    fn is_zero(&self, a: &CycloElement) -> bool {
        a.is_zero()
    }
    fn halve(&self, a: &CycloElement) -> CycloElement {
        a.scale(&BigRational::new(1.into(), 2.into()))
    }
}

/// An element of R[G], stored densely over the group's element order.
#[derive(Clone, Debug)]
pub struct GrElem<R: CoeffRing> {
    pub ring: R,
    pub grp: Arc<Group>,
    pub coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> PartialEq for GrElem<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.grp == other.grp && self.coeffs == other.coeffs
    }
}

impl<R: CoeffRing> GrElem<R> {
    pub fn zero(ring: R, grp: &Arc<Group>) -> Self {
        let coeffs = vec![ring.zero(); grp.order()];
        GrElem {
            ring,
            grp: Arc::clone(grp),
            coeffs,
        }
    }

    pub fn one(ring: R, grp: &Arc<Group>) -> Self {
        let mut e = GrElem::zero(ring, grp);
        e.coeffs[0] = e.ring.one();
        e
    }

    /// The basis element g (by index).
    pub fn basis(ring: R, grp: &Arc<Group>, idx: usize) -> Self {
        let mut e = GrElem::zero(ring, grp);
        e.coeffs[idx] = e.ring.one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grp, other.grp);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        GrElem {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.grp, other.grp);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        GrElem {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.neg(a)).collect();
        GrElem {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            coeffs,
        }
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, s)).collect();
        GrElem {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            coeffs,
        }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.grp, other.grp);
        let n = self.grp.order();
        let mut out = GrElem::zero(self.ring.clone(), &self.grp);
        for i in 0..n {
            if self.ring.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..n {
                if self.ring.is_zero(&other.coeffs[j]) {
                    continue;
                }
                let k = self.grp.mul_idx(i, j);
                let t = self.ring.mul(&self.coeffs[i], &other.coeffs[j]);
                out.coeffs[k] = self.ring.add(&out.coeffs[k], &t);
            }
        }
        out
    }

    /// Left translation by the group element with index `g`.
    pub fn translate(&self, g: usize) -> Self {
        let n = self.grp.order();
        let mut out = GrElem::zero(self.ring.clone(), &self.grp);
        for i in 0..n {
            out.coeffs[self.grp.mul_idx(g, i)] = self.coeffs[i].clone();
        }
        out
    }

    /// The involution g -> g^{-1} (denoted * in duality contexts).
    pub fn star(&self) -> Self {
        let n = self.grp.order();
        let mut out = GrElem::zero(self.ring.clone(), &self.grp);
        for i in 0..n {
            out.coeffs[self.grp.inv_idx(i)] = self.coeffs[i].clone();
        }
        out
    }

    /// Action of complex conjugation c (left multiplication by c).
    pub fn conj(&self) -> Self {
        self.translate(self.grp.conj as usize)
    }

    /// Plus projection e+ x = (1+c)x/2.
    pub fn e_plus(&self) -> Self {
        let s = self.add(&self.conj());
        GrElem {
            ring: s.ring.clone(),
            grp: Arc::clone(&s.grp),
            coeffs: s.coeffs.iter().map(|a| s.ring.halve(a)).collect(),
        }
    }

    /// Minus projection e- x = (1-c)x/2.
    pub fn e_minus(&self) -> Self {
        let s = self.sub(&self.conj());
        GrElem {
            ring: s.ring.clone(),
            grp: Arc::clone(&s.grp),
            coeffs: s.coeffs.iter().map(|a| s.ring.halve(a)).collect(),
        }
    }

    /// Augmentation: sum of coefficients.
    pub fn augmentation(&self) -> R::Elem {
        let mut s = self.ring.zero();
        for c in &self.coeffs {
            s = self.ring.add(&s, c);
        }
        s
    }

    /// Push through a group projection (sum coefficients over fibers).
    pub fn project(&self, target: &Arc<Group>) -> crate::Result<Self> {
        let table = self.grp.projection_table(target)?;
        let mut out = GrElem::zero(self.ring.clone(), target);
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = table[i] as usize;
            out.coeffs[t] = self.ring.add(&out.coeffs[t], c);
        }
        Ok(out)
    }

    /// Corestriction from a quotient group: send g' to the sum of its
    /// preimages in `source`. Additive, not multiplicative.
    pub fn cores_to(&self, source: &Arc<Group>) -> crate::Result<Self> {
        let table = source.projection_table(&self.grp)?;
        let mut out = GrElem::zero(self.ring.clone(), source);
        for (i, &t) in table.iter().enumerate() {
            out.coeffs[i] = self.coeffs[t as usize].clone();
        }
        Ok(out)
    }

    /// Norm element of a subgroup given by element indices: sum of those g.
    pub fn norm_element(ring: R, grp: &Arc<Group>, subgroup: &[usize]) -> Self {
        let mut e = GrElem::zero(ring, grp);
        for &i in subgroup {
            e.coeffs[i] = e.ring.add(&e.coeffs[i], &e.ring.one());
        }
        e
    }
}

impl GrElem<ZMod> {
    /// The twisted involution iota(sum a_g g) = sum a_g chi(g) g^{-1},
    /// where `chi` gives the cyclotomic-character value of each element.
    pub fn iota(&self, chi: &[u128]) -> Self {
        assert_eq!(chi.len(), self.grp.order());
        let n = self.grp.order();
        let mut out = GrElem::zero(self.ring.clone(), &self.grp);
        for i in 0..n {
            let j = self.grp.inv_idx(i);
            let t = self.ring.mul(&self.coeffs[i], &(chi[i] % self.ring.modulus));
            out.coeffs[j] = self.ring.add(&out.coeffs[j], &t);
        }
        out
    }

    /// Reduce a rational group-ring element mod p^M (denominators must be
    /// prime to p).
    pub fn from_rational(ring: ZMod, x: &GrElem<Rationals>) -> Self {
        use num_bigint::BigInt;
        let m = BigInt::from(ring.modulus);
        let coeffs = x
            .coeffs
            .iter()
            .map(|q| {
                let num = q.numer().clone();
                let den = q.denom().clone();
                let num_m: BigInt = ((num % &m) + &m) % &m;
                let den_m: BigInt = ((den % &m) + &m) % &m;
                let num_u: u128 = num_m.try_into().expect("reduced fits");
                let den_u: u128 = den_m.try_into().expect("reduced fits");
                mulm(num_u, invm(den_u, ring.modulus), ring.modulus)
            })
            .collect();
        GrElem {
            ring,
            grp: Arc::clone(&x.grp),
            coeffs,
        }
    }
}
