//! Exact elements of Q(mu_f) on the power basis {xi^a : 0 <= a < phi(f)},
//! reduced against the f-th cyclotomic polynomial. Canonical form, so
//! equality is coefficient equality.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{divisors, euler_phi, gcd};
use crate::{Error, Result};

/// Coefficients of the f-th cyclotomic polynomial (integer, monic,
/// ascending degree), by recursive division of x^f - 1.
pub fn cyclotomic_poly(f: u64) -> Vec<BigInt> {
    assert!(f >= 1);
    if f == 1 {
        return vec![BigInt::from(-1), BigInt::from(1)];
    }
    let mut num = vec![BigInt::zero(); f as usize + 1];
    num[0] = BigInt::from(-1);
    num[f as usize] = BigInt::one();
    let mut result = num;
    for d in divisors(f) {
        if d == f {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        result = exact_div(&result, &phi_d);
    }
    result
}

/// Exact division of integer polynomials (divisor monic up to sign of lead).
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd);
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    let lead = den[dd].clone();
    for k in (0..=dn - dd).rev() {
        let c = &rem[k + dd] / &lead;
        quot[k] = c.clone();
        if !c.is_zero() {
            for (i, de) in den.iter().enumerate() {
                let t = de * &c;
                rem[k + i] -= t;
            }
        }
    }
    assert!(rem.iter().all(|x| x.is_zero()), "division not exact");
    quot
}

/// Cached per-conductor data: Phi_f and the reduction rows of x^k mod Phi_f.
pub struct CycloCtx {
    pub f: u64,
    pub degree: usize,
    pub phi: Vec<BigInt>,
    /// red[k] = coefficients of x^(degree+k) mod Phi_f, for k = 0.. up to
    /// max(f-1, 2*degree-2) - degree.
    red: Vec<Vec<BigInt>>,
}

static CTX_CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloCtx>>>> = OnceLock::new();

impl CycloCtx {
    pub fn get(f: u64) -> Arc<CycloCtx> {
        assert!(f >= 1 && f % 4 != 2, "conductor must be 1 or != 2 mod 4");
        let cache = CTX_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(ctx) = guard.get(&f) {
            return Arc::clone(ctx);
        }
        let phi = cyclotomic_poly(f);
        let d = phi.len() - 1;
        debug_assert_eq!(d as u64, euler_phi(f));
        let kmax = std::cmp::max(f as usize, 2 * d).saturating_sub(d);
        let mut red: Vec<Vec<BigInt>> = Vec::with_capacity(kmax);
        // x^d = -(phi[0] + ... + phi[d-1] x^{d-1})
        let base: Vec<BigInt> = phi[..d].iter().map(|c| -c).collect();
        red.push(base);
        for k in 1..kmax {
            // x^{d+k} = x * x^{d+k-1}
            let prev = &red[k - 1];
            let mut row = vec![BigInt::zero(); d];
            let top = prev[d - 1].clone();
            for i in (1..d).rev() {
                row[i] = prev[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, b) in red[0].iter().enumerate() {
                    let t = b * &top;
                    row[i] += t;
                }
            }
            red.push(row);
        }
        let ctx = Arc::new(CycloCtx {
            f,
            degree: d,
            phi,
            red,
        });
        guard.insert(f, Arc::clone(&ctx));
        ctx
    }

    /// Reduction of x^k (k < f or k < 2*degree-1) on the power basis.
    fn power_row(&self, k: usize) -> Vec<BigRational> {
        if k < self.degree {
            let mut v = vec![BigRational::zero(); self.degree];
            v[k] = BigRational::one();
            v
        } else {
            self.red[k - self.degree]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        }
    }
}

/// An exact element of Q(mu_f) in canonical reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    pub f: u64,
    pub coeffs: Vec<BigRational>,
}

impl CycloElement {
    pub fn zero(f: u64) -> Self {
        let d = CycloCtx::get(f).degree;
        CycloElement {
            f,
            coeffs: vec![BigRational::zero(); d],
        }
    }

    pub fn one(f: u64) -> Self {
        let mut e = CycloElement::zero(f);
        e.coeffs[0] = BigRational::one();
        e
    }

    pub fn from_rational(f: u64, q: BigRational) -> Self {
        let mut e = CycloElement::zero(f);
        e.coeffs[0] = q;
        e
    }

    /// xi_f^k (k arbitrary integer).
    pub fn root_of_unity(f: u64, k: i64) -> Self {
        let ctx = CycloCtx::get(f);
        let kk = k.rem_euclid(f as i64) as usize;
        CycloElement {
            f,
            coeffs: ctx.power_row(kk),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.f, other.f);
        CycloElement {
            f: self.f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.f, other.f);
        CycloElement {
            f: self.f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycloElement {
            f: self.f,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        CycloElement {
            f: self.f,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.f, other.f);
        let ctx = CycloCtx::get(self.f);
        let d = ctx.degree;
        let mut conv = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                conv[i + j] += a * b;
            }
        }
        let mut out = conv[..d].to_vec();
        for (k, c) in conv.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (i, r) in ctx.red[k - d].iter().enumerate() {
                if !r.is_zero() {
                    out[i] += c * BigRational::from_integer(r.clone());
                }
            }
        }
        CycloElement {
            f: self.f,
            coeffs: out,
        }
    }

    /// Galois action sigma_b: xi -> xi^b (b coprime to f).
    pub fn galois(&self, b: u64) -> Self {
        assert!(gcd(b as u128, self.f as u128) == 1, "sigma_b needs (b,f)=1");
        let ctx = CycloCtx::get(self.f);
        let mut out = vec![BigRational::zero(); ctx.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i as u64 * (b % self.f)) % self.f;
            for (j, r) in ctx.power_row(k as usize).iter().enumerate() {
                if !r.is_zero() {
                    out[j] += c * r;
                }
            }
        }
        CycloElement {
            f: self.f,
            coeffs: out,
        }
    }

    /// Embed into Q(mu_f2) for f | f2 via xi_f -> xi_f2^(f2/f).
    pub fn embed(&self, f2: u64) -> Self {
        assert!(f2 % self.f == 0);
        if f2 == self.f {
            return self.clone();
        }
        let step = f2 / self.f;
        let ctx = CycloCtx::get(f2);
        let mut out = vec![BigRational::zero(); ctx.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i as u64 * step) % f2;
            for (j, r) in ctx.power_row(k as usize).iter().enumerate() {
                if !r.is_zero() {
                    out[j] += c * r;
                }
            }
        }
        CycloElement { f: f2, coeffs: out }
    }

    /// Express this element in Q(mu_f2) for f2 | f, if it lies there.
    pub fn push_down(&self, f2: u64) -> Result<Self> {
        if self.f % f2 != 0 {
            return Err(Error::NotSubfield(format!("Q(mu_{f2})")));
        }
        if f2 == self.f {
            return Ok(self.clone());
        }
        let d2 = CycloCtx::get(f2).degree;
        // columns: images of xi_f2^j in Q(mu_f)
        let cols: Vec<CycloElement> = (0..d2)
            .map(|j| CycloElement::root_of_unity(f2, j as i64).embed(self.f))
            .collect();
        let d = self.coeffs.len();
        // solve sum_j y_j cols[j] = self by Gaussian elimination on the
        // d x (d2+1) augmented system
        let mut aug: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(self.coeffs[i].clone());
                row
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0usize;
        for c in 0..d2 {
            if let Some(pr) = (r..d).find(|&i| !aug[i][c].is_zero()) {
                aug.swap(r, pr);
                let pv = aug[r][c].clone();
                for x in aug[r].iter_mut() {
                    *x = &*x / &pv;
                }
                for i in 0..d {
                    if i != r && !aug[i][c].is_zero() {
                        let f0 = aug[i][c].clone();
                        let rr = aug[r].clone();
                        for (x, y) in aug[i].iter_mut().zip(&rr) {
                            let t = y * &f0;
                            *x = &*x - &t;
                        }
                    }
                }
                pivots.push((r, c));
                r += 1;
            }
        }
        // consistency: rows beyond rank must have zero rhs
        for row in aug.iter().skip(r) {
            if !row[d2].is_zero() {
                return Err(Error::NotSubfield(format!(
                    "element does not lie in Q(mu_{f2})"
                )));
            }
        }
        let mut y = vec![BigRational::zero(); d2];
        for &(pr, pc) in &pivots {
            y[pc] = aug[pr][d2].clone();
        }
        Ok(CycloElement { f: f2, coeffs: y })
    }

    /// Multiplicative inverse via extended Euclid against Phi_f.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidParam("inverse of zero".into()));
        }
        let ctx = CycloCtx::get(self.f);
        let phi: Vec<BigRational> = ctx
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let a = trim(self.coeffs.clone());
        let (g, _, t) = poly_extgcd(&phi, &a);
        // g must be a nonzero constant
        if g.len() != 1 || g[0].is_zero() {
            return Err(Error::InvalidParam("element not invertible".into()));
        }
        let ginv = BigRational::one() / g[0].clone();
        let mut coeffs: Vec<BigRational> = t.iter().map(|c| c * &ginv).collect();
        // t may have degree >= d in pathological cases; reduce by mul with one
        coeffs.resize(ctx.degree, BigRational::zero());
        let inv = CycloElement {
            f: self.f,
            coeffs,
        };
        debug_assert_eq!(inv.mul(self), CycloElement::one(self.f));
        Ok(inv)
    }

    /// Product of sigma_h(self) over the given representatives.
    pub fn galois_product(&self, reps: &[u64]) -> Self {
        let mut acc = CycloElement::one(self.f);
        for &h in reps {
            acc = acc.mul(&self.galois(h));
        }
        acc
    }

    /// Evaluate modulo a prime q at an element u of F_q (xi -> u).
    /// Fails if a denominator vanishes mod q.
    pub fn eval_mod(&self, u: u64, q: u64) -> Result<u64> {
        let qb = BigInt::from(q);
        let mut acc: u128 = 0;
        let mut pw: u128 = 1;
        for c in &self.coeffs {
            if !c.is_zero() {
                let num = c.numer().mod_floor_big(&qb);
                let den = c.denom().mod_floor_big(&qb);
                if den == 0 {
                    return Err(Error::BadPrimePair);
                }
                let v = crate::arith::mulm(num, crate::arith::invm(den, q as u128), q as u128);
                acc = (acc + crate::arith::mulm(v, pw, q as u128)) % q as u128;
            }
            pw = crate::arith::mulm(pw, u as u128, q as u128);
        }
        Ok(acc as u64)
    }

    /// JSON form {f, coeffs: [[a, num, den], ...]} with nonzero entries only.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| {
                serde_json::json!([a, c.numer().to_string(), c.denom().to_string()])
            })
            .collect();
        serde_json::json!({ "f": self.f, "coeffs": coeffs })
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> u128;
}
impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> u128 {
        let r = ((self % m) + m) % m;
        r.try_into().unwrap()
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_quotrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let c = &r[dr] / &lead;
        q[dr - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            r[dr - db + i] = &r[dr - db + i] - &t;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    // a - q*b
    let mut out = vec![BigRational::zero(); std::cmp::max(a.len(), q.len() + b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, qc) in q.iter().enumerate() {
        if qc.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            let t = qc * bc;
            out[i + j] = &out[i + j] - &t;
        }
    }
    trim(out)
}

/// Extended gcd for rational polynomials: returns (g, s, t) with
/// s*a + t*b = g.
fn poly_extgcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_quotrem(&r0, &r1);
        let s = poly_sub_mul(&s0, &q, &s1);
        let t = poly_sub_mul(&t0, &q, &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}
