//! Module lattices inside (Z/p^M)[G], kept in Howell normal form.
//!
//! The Howell form is the canonical strong echelon form for row spans over
//! Z/p^M: pivots are exact powers of p, entries above a pivot are reduced
//! modulo it, and the span is closed under the "shadow" rows p^(M-v) * row.
//! Two submodules are equal iff their Howell forms agree, and membership is
//! a single reduction pass. Pivot selection is by minimal p-valuation with
//! ties broken by row order.
//!
//! Fractional lattices carry a single global denominator exponent `a`,
//! representing p^(-a) times the stored integral span.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::group::Group;
use super::ring::{CoeffRing, GrElem, ZMod};
use crate::{Error, Result};

/// A finitely generated module over Z/p^M inside R[G], SNF/Howell-normalized,
/// with an optional global denominator exponent for fractional lattices.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub ring: ZMod,
    pub grp: Arc<Group>,
    /// Lattice = p^(-denom_exp) * row span of `rows`.
    pub denom_exp: u32,
    /// Canonical Howell basis of the integral part.
    pub rows: Vec<Vec<u128>>,
}

fn val(ring: &ZMod, x: u128) -> u32 {
    ring.val(x)
}

fn row_is_zero(r: &[u128]) -> bool {
    r.iter().all(|&x| x == 0)
}

fn scale_row(ring: &ZMod, r: &[u128], c: u128) -> Vec<u128> {
    r.iter().map(|&x| ring.mul(&x, &c)).collect()
}

fn sub_mul(ring: &ZMod, r: &mut [u128], e: &[u128], c: u128) {
    for (x, &y) in r.iter_mut().zip(e) {
        *x = ring.sub(x, &ring.mul(&y, &c));
    }
}

/// Compute the canonical Howell form of the span of `rows` over Z/p^M.
pub fn howell(ring: &ZMod, rows: Vec<Vec<u128>>) -> Vec<Vec<u128>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    // echelon[j] = row with pivot at column j, if any
    let mut echelon: Vec<Option<Vec<u128>>> = vec![None; ncols];
    let mut stack: Vec<Vec<u128>> = rows
        .into_iter()
        .map(|r| r.iter().map(|&x| x % ring.modulus).collect())
        .collect();
    let p = ring.p as u128;

    while let Some(mut r) = stack.pop() {
        loop {
            let lead = match r.iter().position(|&x| x != 0) {
                Some(j) => j,
                None => break,
            };
            let v_r = val(ring, r[lead]);
            match &echelon[lead] {
                Some(e) => {
                    let v_e = val(ring, e[lead]);
                    if v_r >= v_e {
                        let c = r[lead] / p.pow(v_e);
                        let e = e.clone();
                        sub_mul(ring, &mut r, &e, c);
                        debug_assert_eq!(r[lead], 0);
                    } else {
                        // r is the better pivot; swap
                        let unit = r[lead] / p.pow(v_r);
                        let norm = scale_row(ring, &r, ring.inv(unit));
                        let old = echelon[lead].replace(norm.clone());
                        if v_r + 1 <= ring.m_exp && v_r > 0 {
                            stack.push(scale_row(ring, &norm, p.pow(ring.m_exp - v_r)));
                        }
                        r = old.unwrap();
                    }
                }
                None => {
                    let unit = r[lead] / p.pow(v_r);
                    let norm = scale_row(ring, &r, ring.inv(unit));
                    echelon[lead] = Some(norm.clone());
                    if v_r > 0 {
                        stack.push(scale_row(ring, &norm, p.pow(ring.m_exp - v_r)));
                    }
                    break;
                }
            }
        }
    }

    // reduce entries above each pivot modulo the pivot
    let pivot_cols: Vec<usize> = (0..ncols).filter(|&j| echelon[j].is_some()).collect();
    for &j in &pivot_cols {
        let e = echelon[j].clone().unwrap();
        let pv = p.pow(val(ring, e[j]));
        for &j2 in &pivot_cols {
            if j2 >= j {
                break;
            }
            if let Some(r) = echelon[j2].as_mut() {
                let c = r[j] / pv;
                if c != 0 {
                    sub_mul(ring, r, &e, c);
                }
            }
        }
    }

    pivot_cols
        .into_iter()
        .map(|j| echelon[j].take().unwrap())
        .collect()
}

impl IdealLattice {
    /// Span the gens (coefficient vectors) as a module; if `close_under_g`,
    /// first close under multiplication by every group element.
    pub fn span(ring: &ZMod, grp: &Arc<Group>, gens: &[GrElem<ZMod>], close_under_g: bool) -> Result<IdealLattice> {
        for g in gens {
            if g.grp != *grp || g.ring != *ring {
                return Err(Error::Mismatch("span: mixed ambients".into()));
            }
        }
        let mut rows: Vec<Vec<u128>> = Vec::new();
        for g in gens {
            if close_under_g {
                for t in 0..grp.order() {
                    rows.push(g.translate(t).coeffs);
                }
            } else {
                rows.push(g.coeffs.clone());
            }
        }
        Ok(IdealLattice {
            ring: ring.clone(),
            grp: Arc::clone(grp),
            denom_exp: 0,
            rows: howell(ring, rows),
        })
    }

    pub fn zero(ring: &ZMod, grp: &Arc<Group>) -> IdealLattice {
        IdealLattice {
            ring: ring.clone(),
            grp: Arc::clone(grp),
            denom_exp: 0,
            rows: Vec::new(),
        }
    }

    /// The full ring Z/p^M[G] as a lattice.
    pub fn full(ring: &ZMod, grp: &Arc<Group>) -> IdealLattice {
        let one = GrElem::one(ring.clone(), grp);
        IdealLattice::span(ring, grp, &[one], true).expect("full span")
    }

    pub fn from_rows(ring: &ZMod, grp: &Arc<Group>, rows: Vec<Vec<u128>>, denom_exp: u32) -> IdealLattice {
        IdealLattice {
            ring: ring.clone(),
            grp: Arc::clone(grp),
            denom_exp,
            rows: howell(ring, rows),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.grp.order()
    }

    /// Exponent e with |ambient / integral part| = p^e (ambient = (Z/p^M)^d).
    pub fn index_exp(&self) -> u32 {
        let d = self.dim() as u32;
        let r = self.rows.len() as u32;
        let mut s = self.ring.m_exp * (d - r);
        for row in &self.rows {
            let j = row.iter().position(|&x| x != 0).expect("canonical rows nonzero");
            s += val(&self.ring, row[j]);
        }
        s
    }

    /// True when the integral part is all of (Z/p^M)[G] and denom_exp = 0.
    pub fn is_full_ring(&self) -> bool {
        self.denom_exp == 0 && self.index_exp() == 0
    }

    /// Membership of an integral element (denominator exponent 0 ambient).
    pub fn contains(&self, x: &GrElem<ZMod>) -> bool {
        assert_eq!(self.grp, x.grp);
        // p^(-a) L0 contains x  iff  p^a x in L0
        let pa = (self.ring.p as u128).pow(self.denom_exp);
        let mut v: Vec<u128> = x.coeffs.iter().map(|&c| self.ring.mul(&c, &pa)).collect();
        self.reduce_vec(&mut v);
        row_is_zero(&v)
    }

    fn reduce_vec(&self, v: &mut [u128]) {
        let p = self.ring.p as u128;
        for row in &self.rows {
            let j = row.iter().position(|&x| x != 0).unwrap();
            let pv = p.pow(val(&self.ring, row[j]));
            if v[j] != 0 && v[j] % pv == 0 {
                let c = v[j] / pv;
                sub_mul(&self.ring, v, row, c);
            }
        }
    }

    /// Join (sum) of two lattices over the same ambient.
    pub fn join(&self, other: &IdealLattice) -> IdealLattice {
        assert_eq!(self.grp, other.grp);
        assert_eq!(self.ring, other.ring);
        let a = self.denom_exp.max(other.denom_exp);
        let p = self.ring.p as u128;
        let mut rows: Vec<Vec<u128>> = Vec::new();
        for r in &self.rows {
            rows.push(scale_row(&self.ring, r, p.pow(a - self.denom_exp)));
        }
        for r in &other.rows {
            rows.push(scale_row(&self.ring, r, p.pow(a - other.denom_exp)));
        }
        IdealLattice {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            denom_exp: a,
            rows: howell(&self.ring, rows),
        }
    }

    /// Multiply the lattice by a group-ring element.
    pub fn mul_elem(&self, x: &GrElem<ZMod>) -> IdealLattice {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let e = GrElem {
                    ring: self.ring.clone(),
                    grp: Arc::clone(&self.grp),
                    coeffs: r.clone(),
                };
                e.mul(x).coeffs
            })
            .collect();
        IdealLattice {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            denom_exp: self.denom_exp,
            rows: howell(&self.ring, rows),
        }
    }

    /// Minus part e- L (p odd, so 1/2 exists).
    pub fn minus_part(&self) -> IdealLattice {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let e = GrElem {
                    ring: self.ring.clone(),
                    grp: Arc::clone(&self.grp),
                    coeffs: r.clone(),
                };
                e.e_minus().coeffs
            })
            .collect();
        IdealLattice {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            denom_exp: self.denom_exp,
            rows: howell(&self.ring, rows),
        }
    }

    /// Equality as fractional lattices, compared at precision p^prec on the
    /// integral parts after aligning denominators.
    pub fn eq_at(&self, other: &IdealLattice, prec: u32) -> bool {
        if self.grp != other.grp || self.ring.p != other.ring.p {
            return false;
        }
        let a = self.denom_exp.max(other.denom_exp);
        let p = self.ring.p as u128;
        let r = ZMod::new(self.ring.p, prec);
        let lift = |l: &IdealLattice| -> Vec<Vec<u128>> {
            l.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&x| (x % r.modulus) * p.pow(a - l.denom_exp) % r.modulus)
                        .collect()
                })
                .collect()
        };
        howell(&r, lift(self)) == howell(&r, lift(other))
    }

    /// Equality at the maximal shared precision.
    pub fn eq_lattice(&self, other: &IdealLattice) -> bool {
        let prec = self.ring.m_exp.min(other.ring.m_exp);
        self.eq_at(other, prec)
    }

    /// Check closure under the G-action (every translate of every basis row
    /// stays inside).
    pub fn is_g_stable(&self) -> bool {
        for r in &self.rows {
            let e = GrElem {
                ring: self.ring.clone(),
                grp: Arc::clone(&self.grp),
                coeffs: r.clone(),
            };
            for t in 0..self.grp.order() {
                let mut v = e.translate(t).coeffs;
                self.reduce_vec(&mut v);
                if !row_is_zero(&v) {
                    return false;
                }
            }
        }
        true
    }

    /// Basis rows as group-ring elements.
    pub fn basis_elems(&self) -> Vec<GrElem<ZMod>> {
        self.rows
            .iter()
            .map(|r| GrElem {
                ring: self.ring.clone(),
                grp: Arc::clone(&self.grp),
                coeffs: r.clone(),
            })
            .collect()
    }

    /// Dual lattice {y : x* y integral for all x in L} with respect to the
    /// coefficient-of-1 pairing, via exact inverse-transpose of a basis.
    /// Requires full rank in the ambient Q_p[G]-span.
    pub fn dual_star(&self) -> Result<IdealLattice> {
        let d = self.dim();
        if self.rows.len() < d {
            return Err(Error::RankDeficient);
        }
        // star the basis: dual wrt B_n(x,y) = coeff of 1 in x* y is the
        // plain dot-product dual of the lattice itself; the star involution
        // is already absorbed by B_n being the standard dot product.
        let b: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let binv = invert_matrix(&b).ok_or(Error::RankDeficient)?;
        // dual integral rows = transpose of binv, times p^a (denom handling)
        let p = BigInt::from(self.ring.p);
        let mut max_den: u32 = 0;
        for row in &binv {
            for e in row {
                max_den = max_den.max(val_p_bigint(e.denom(), &p));
            }
        }
        // L = p^{-a} span(B); L* = p^{a} span(B^{-T});
        // write p^{a} B^{-T} = p^{-(b-a)} (p^{b} B^{-T}) with b = max_den
        let b_exp = max_den;
        let new_denom = b_exp.saturating_sub(self.denom_exp);
        let extra = self.denom_exp.saturating_sub(b_exp); // multiply in if a > b
        let scale: BigInt = p.pow(b_exp + extra);
        let m = BigInt::from(self.ring.modulus);
        let mut rows: Vec<Vec<u128>> = Vec::new();
        for j in 0..d {
            let mut row = Vec::with_capacity(d);
            for binv_i in binv.iter().take(d) {
                let q = &binv_i[j] * BigRational::from_integer(scale.clone());
                // q has p-integral denominator now; invert the prime-to-p part mod p^M
                let num = q.numer().clone();
                let den = q.denom().clone();
                debug_assert_eq!(val_p_bigint(&den, &p), 0);
                let num_m: BigInt = ((num % &m) + &m) % &m;
                let den_m: BigInt = ((den % &m) + &m) % &m;
                let num_u: u128 = num_m.try_into().unwrap();
                let den_u: u128 = den_m.try_into().unwrap();
                row.push(self.ring.mul(&num_u, &self.ring.inv(den_u)));
            }
            rows.push(row);
        }
        Ok(IdealLattice {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            denom_exp: new_denom,
            rows: howell(&self.ring, rows),
        })
    }

    /// Independent route for the dual: solve the integrality constraints
    /// generator by generator as a kernel computation, allowing denominators
    /// up to p^(-den_bound). Test oracle for `dual_star`.
    pub fn dual_star_solve(&self, den_bound: u32) -> IdealLattice {
        let d = self.dim();
        let a = self.denom_exp;
        let t = a + den_bound; // constraints mod p^t
        let tr = ZMod::new(self.ring.p, t.max(1));
        // stack multiplication matrices of star(x_i), x_i basis rows
        let mut big: Vec<Vec<u128>> = Vec::new();
        for r in &self.rows {
            let x = GrElem {
                ring: self.ring.clone(),
                grp: Arc::clone(&self.grp),
                coeffs: r.clone(),
            };
            let xs = x.star();
            // condition: star(x_int) z == 0 mod p^t (z = p^{den_bound} y)
            let mm = mult_matrix(&xs);
            for row in mm {
                big.push(row.iter().map(|&e| e % tr.modulus).collect());
            }
        }
        let kern = kernel_mod(&tr, &big, d);
        let rows: Vec<Vec<u128>> = kern
            .into_iter()
            .map(|r| r.iter().map(|&x| x % self.ring.modulus).collect())
            .collect();
        IdealLattice {
            ring: self.ring.clone(),
            grp: Arc::clone(&self.grp),
            denom_exp: den_bound,
            rows: howell(&self.ring, rows),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ambient": {
                "p": self.ring.p,
                "M": self.ring.m_exp,
                "group": { "modulus": self.grp.modulus, "order": self.grp.order(), "reps": self.grp.elems },
            },
            "denom_exp": self.denom_exp,
            "basis": self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Matrix of left multiplication by x on R[G]: column j is x * g_j.
pub fn mult_matrix(x: &GrElem<ZMod>) -> Vec<Vec<u128>> {
    let n = x.grp.order();
    let mut m = vec![vec![0u128; n]; n];
    for j in 0..n {
        let col = x.translate(j);
        for i in 0..n {
            m[i][j] = col.coeffs[i];
        }
    }
    m
}

/// Generators of {y in (Z/p^t)^d : A y == 0 mod p^t} via SNF with tracked
/// column operations.
pub fn kernel_mod(ring: &ZMod, a: &[Vec<u128>], d: usize) -> Vec<Vec<u128>> {
    let nr = a.len();
    let p = ring.p as u128;
    let t = ring.m_exp;
    let mut m: Vec<Vec<u128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x % ring.modulus).collect())
        .collect();
    // column transform C (d x d): y = C z
    let mut c: Vec<Vec<u128>> = (0..d)
        .map(|i| (0..d).map(|j| u128::from(i == j)).collect())
        .collect();
    let mut pivots: Vec<u32> = Vec::new();
    let mut k = 0usize;
    while k < nr.min(d) {
        // find min-valuation entry in submatrix [k..][k..]
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, mi) in m.iter().enumerate().skip(k) {
            for (j, &e) in mi.iter().enumerate().skip(k) {
                if e != 0 {
                    let v = ring.val(e);
                    if best.map(|(_, _, bv)| v < bv).unwrap_or(true) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (pi, pj, pv) = match best {
            Some(b) => b,
            None => break,
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for row in c.iter_mut() {
            row.swap(k, pj);
        }
        // normalize pivot to p^pv by scaling the row (row ops are free)
        let unit = m[k][k] / p.pow(pv);
        let uinv = ring.inv(unit);
        for j in 0..d {
            m[k][j] = ring.mul(&m[k][j], &uinv);
        }
        // clear column below
        for i in k + 1..nr {
            if m[i][k] != 0 {
                let f = m[i][k] / p.pow(pv);
                let mk = m[k].clone();
                sub_mul(ring, &mut m[i], &mk, f);
            }
        }
        // clear row to the right with column ops, mirrored into C
        for j in k + 1..d {
            if m[k][j] != 0 {
                let f = m[k][j] / p.pow(pv);
                for i in 0..nr {
                    let s = ring.mul(&m[i][k], &f);
                    m[i][j] = ring.sub(&m[i][j], &s);
                }
                for ci in c.iter_mut() {
                    let s = ring.mul(&ci[k], &f);
                    ci[j] = ring.sub(&ci[j], &s);
                }
            }
        }
        pivots.push(pv);
        k += 1;
    }
    // kernel of diag(p^{v_0..}) mod p^t: z_i = p^{t - v_i} free for i < k, free for i >= k
    let mut gens: Vec<Vec<u128>> = Vec::new();
    for (i, &v) in pivots.iter().enumerate() {
        if v == 0 && t > 0 {
            // z_i multiple of p^t = 0: no generator unless v>0
            continue;
        }
        let scale = p.pow(t - v.min(t));
        let g: Vec<u128> = (0..d).map(|r| ring.mul(&c[r][i], &scale)).collect();
        gens.push(g);
    }
    for i in pivots.len()..d {
        let g: Vec<u128> = (0..d).map(|r| c[r][i]).collect();
        gens.push(g);
    }
    gens
}

fn val_p_bigint(x: &BigInt, p: &BigInt) -> u32 {
    if x.is_zero() {
        return 0;
    }
    let mut v = 0;
    let mut y = x.abs();
    while (&y % p).is_zero() {
        y /= p;
        v += 1;
    }
    v
}

/// Exact inverse of a square rational matrix, None if singular.
pub fn invert_matrix(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let pv = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &pv;
            inv[col][j] = &inv[col][j] / &pv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..n {
                    let t = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                    let t = &inv[col][j] * &f;
                    inv[i][j] = &inv[i][j] - &t;
                }
            }
        }
    }
    Some(inv)
}

/// Fitting ideal of the module presented by `relations` (rows) on
/// `num_gens` generators: the ideal generated by all num_gens x num_gens
/// minors, closed under G and Howell-normalized.
pub fn fitting_ideal(
    ring: &ZMod,
    grp: &Arc<Group>,
    relations: &[Vec<GrElem<ZMod>>],
    num_gens: usize,
) -> Result<IdealLattice> {
    if relations.is_empty() || num_gens == 0 {
        return Err(Error::InvalidParam("empty presentation".into()));
    }
    for row in relations {
        if row.len() != num_gens {
            return Err(Error::Mismatch("relation width != generator count".into()));
        }
    }
    if relations.len() < num_gens {
        // no maximal minors: zero Fitting ideal
        return Ok(IdealLattice::zero(ring, grp));
    }
    let mut minors: Vec<GrElem<ZMod>> = Vec::new();
    let mut choose = vec![0usize; num_gens];
    fn rec(
        relations: &[Vec<GrElem<ZMod>>],
        num_gens: usize,
        start: usize,
        k: usize,
        choose: &mut Vec<usize>,
        minors: &mut Vec<GrElem<ZMod>>,
    ) {
        if k == num_gens {
            let sub: Vec<&Vec<GrElem<ZMod>>> = choose.iter().map(|&i| &relations[i]).collect();
            minors.push(det(&sub));
            return;
        }
        for i in start..relations.len() {
            choose[k] = i;
            rec(relations, num_gens, i + 1, k + 1, choose, minors);
        }
    }
    rec(relations, num_gens, 0, 0, &mut choose, &mut minors);
    IdealLattice::span(ring, grp, &minors, true)
}

/// Determinant of a small square matrix of group-ring elements (Laplace).
fn det(m: &[&Vec<GrElem<ZMod>>]) -> GrElem<ZMod> {
    let n = m.len();
    let ring = m[0][0].ring.clone();
    let grp = Arc::clone(&m[0][0].grp);
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = GrElem::zero(ring, &grp);
    for i in 0..n {
        // minor removing row i, column 0
        let rest: Vec<&Vec<GrElem<ZMod>>> = (0..n).filter(|&r| r != i).map(|r| m[r]).collect();
        let sub: Vec<Vec<GrElem<ZMod>>> = rest
            .iter()
            .map(|row| row[1..].to_vec())
            .collect();
        let sub_refs: Vec<&Vec<GrElem<ZMod>>> = sub.iter().collect();
        let minor = det(&sub_refs);
        let term = m[i][0].mul(&minor);
        if i % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}
