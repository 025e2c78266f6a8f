//! Precision-tracked arithmetic in Z_p[zeta_{p^(n+1)}] on the power basis
//! of the cyclotomic polynomial, with the p-adic logarithm and exponential.
//!
//! Accuracy model: an element stores some integer representative of each
//! coefficient mod p^m_work together with a declared accuracy `acc`; the
//! true coefficient agrees with the representative mod p^acc. Ring
//! operations keep the minimum accuracy; division by p^k is exact on
//! representatives and costs k digits.

use std::sync::Arc;

use rand::Rng;

use crate::arith::{invm, mulm, powm};
use crate::{Error, Result};

/// Shared data for one local ring Z_p[zeta_{p^(n+1)}] at a working modulus.
#[derive(Debug)]
pub struct LocalCtx {
    pub p: u64,
    pub n: u32,
    /// Degree phi(p^(n+1)) = (p-1) p^n.
    pub d: usize,
    pub m_work: u32,
    pub modulus: u128,
    /// p/(zeta - 1) on the power basis (integral element).
    w_over_uniformizer: Vec<u128>,
}

impl LocalCtx {
    pub fn new(p: u64, n: u32, m_work: u32) -> Arc<LocalCtx> {
        let d = ((p - 1) * p.pow(n)) as usize;
        let modulus = (p as u128).pow(m_work);
        assert!(modulus < (1 << 62), "working modulus too large");
        // w = (p - Phi(X)) / (X - 1): synthetic division, exact over Z.
        // Phi = sum_{i<p} X^{i p^n}; p - Phi has the same roots shifted.
        let pn = p.pow(n) as usize;
        let mut poly = vec![0i128; d + 1]; // p - Phi
        poly[0] = p as i128 - 1;
        for i in 1..p as usize {
            poly[i * pn] = -1;
        }
        // divide by (X - 1): quotient degree d-1
        let mut q = vec![0i128; d];
        let mut carry = 0i128;
        for k in (0..d).rev() {
            // (X-1) * q = poly: q[k] = poly[k+1] + q[k+1]
            carry += poly[k + 1];
            q[k] = carry;
        }
        debug_assert_eq!(-q[0] + poly[0], 0, "division exact: remainder p - Phi(1) = 0");
        let w_over_uniformizer = q
            .iter()
            .map(|&c| c.rem_euclid(modulus as i128) as u128)
            .collect();
        Arc::new(LocalCtx {
            p,
            n,
            d,
            m_work,
            modulus,
            w_over_uniformizer,
        })
    }

    pub fn pn1(&self) -> u64 {
        self.p.pow(self.n + 1)
    }

    /// Ramification index e = d (totally ramified over Q_p).
    pub fn e(&self) -> usize {
        self.d
    }
}

/// An element of Z_p[zeta] with declared accuracy.
#[derive(Clone, Debug)]
pub struct LocalElement {
    pub ctx: Arc<LocalCtx>,
    pub coeffs: Vec<u128>,
    pub acc: u32,
}

impl LocalElement {
    pub fn zero(ctx: &Arc<LocalCtx>) -> Self {
        LocalElement {
            ctx: Arc::clone(ctx),
            coeffs: vec![0; ctx.d],
            acc: ctx.m_work,
        }
    }

    pub fn one(ctx: &Arc<LocalCtx>) -> Self {
        let mut e = LocalElement::zero(ctx);
        e.coeffs[0] = 1;
        e
    }

    pub fn from_u128(ctx: &Arc<LocalCtx>, v: u128) -> Self {
        let mut e = LocalElement::zero(ctx);
        e.coeffs[0] = v % ctx.modulus;
        e
    }

    /// zeta^k (k mod p^(n+1)), reduced to the power basis.
    pub fn zeta_pow(ctx: &Arc<LocalCtx>, k: u64) -> Self {
        let pn1 = ctx.pn1();
        let k = (k % pn1) as usize;
        let mut e = LocalElement::zero(ctx);
        if k < ctx.d {
            e.coeffs[k] = 1;
        } else {
            // zeta^(d + r) = -sum_{i<p-1} zeta^(i p^n + r)
            let r = k - ctx.d;
            let pn = ctx.p.pow(ctx.n) as usize;
            for i in 0..(ctx.p - 1) as usize {
                let idx = i * pn + r;
                e.coeffs[idx] = ctx.modulus - 1;
            }
        }
        e
    }

    pub fn is_zero_at_acc(&self) -> bool {
        let pa = (self.ctx.p as u128).pow(self.acc);
        self.coeffs.iter().all(|&c| c % pa == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.ctx.modulus;
        LocalElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| (a + b) % m)
                .collect(),
            acc: self.acc.min(o.acc),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.ctx.modulus;
        LocalElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| (a + m - b % m) % m)
                .collect(),
            acc: self.acc.min(o.acc),
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.modulus;
        LocalElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|&a| (m - a % m) % m).collect(),
            acc: self.acc,
        }
    }

    pub fn scale(&self, s: u128) -> Self {
        let m = self.ctx.modulus;
        LocalElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|&a| mulm(a, s, m)).collect(),
            acc: self.acc,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let ctx = &self.ctx;
        let d = ctx.d;
        let m = ctx.modulus;
        let mut conv = vec![0u128; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                conv[i + j] = (conv[i + j] + mulm(a, b, m)) % m;
            }
        }
        // top-down reduction with x^(d+r) = -sum_i x^(i p^n + r)
        let pn = ctx.p.pow(ctx.n) as usize;
        for k in (d..2 * d - 1).rev() {
            let c = conv[k];
            if c == 0 {
                continue;
            }
            conv[k] = 0;
            let r = k - d;
            for i in 0..(ctx.p - 1) as usize {
                let idx = i * pn + r;
                conv[idx] = (conv[idx] + m - c) % m;
            }
        }
        LocalElement {
            ctx: Arc::clone(ctx),
            coeffs: conv[..d].to_vec(),
            acc: self.acc.min(o.acc),
        }
    }

    /// Galois action sigma_b (b coprime to p).
    pub fn galois(&self, b: u64) -> Self {
        let ctx = &self.ctx;
        let pn1 = ctx.pn1();
        let mut out = LocalElement::zero(ctx);
        out.acc = self.acc;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = LocalElement::zeta_pow(ctx, (i as u64 * (b % pn1)) % pn1);
            for (j, &tc) in t.coeffs.iter().enumerate() {
                if tc != 0 {
                    out.coeffs[j] = (out.coeffs[j] + mulm(c, tc, ctx.modulus)) % ctx.modulus;
                }
            }
        }
        out
    }

    /// Trace to Q_p: Tr(zeta^j) = d for j=0, -p^n for v_p(j)=n, else 0.
    pub fn trace(&self) -> u128 {
        let ctx = &self.ctx;
        let m = ctx.modulus;
        let pn = ctx.p.pow(ctx.n) as usize;
        let mut t = mulm(self.coeffs[0], ctx.d as u128, m);
        if ctx.d > 1 {
            for i in 1..(ctx.p - 1) as usize {
                let idx = i * pn;
                if idx < ctx.d && self.coeffs[idx] != 0 {
                    let term = mulm(self.coeffs[idx], pn as u128, m);
                    t = (t + m - term) % m;
                }
            }
        }
        t
    }

    /// Exact division by p^k; errors if a representative is not divisible
    /// (a genuine integrality failure within accuracy). Costs k digits.
    pub fn div_p(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.acc <= k {
            return Err(Error::Precision("division by p exhausts accuracy".into()));
        }
        let pk = (self.ctx.p as u128).pow(k);
        let mut coeffs = Vec::with_capacity(self.ctx.d);
        for &c in &self.coeffs {
            if c % pk != 0 {
                return Err(Error::Precision(format!(
                    "coefficient not divisible by p^{k}"
                )));
            }
            coeffs.push(c / pk);
        }
        Ok(LocalElement {
            ctx: Arc::clone(&self.ctx),
            coeffs,
            acc: self.acc - k,
        })
    }

    /// Division by the uniformizer zeta - 1 (errors when not divisible).
    pub fn div_uniformizer(&self) -> Result<Self> {
        let w = LocalElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.ctx.w_over_uniformizer.clone(),
            acc: self.ctx.m_work,
        };
        self.mul(&w).div_p(1)
    }

    /// The uniformizer valuation, measured destructively on a copy and
    /// capped at `cap` (measurement costs accuracy only on the copy).
    pub fn val_uniformizer(&self, cap: u32) -> u32 {
        let mut x = self.clone();
        let mut v = 0;
        while v < cap {
            if x.is_zero_at_acc() || x.acc <= 1 {
                return cap;
            }
            match x.div_uniformizer() {
                Ok(y) => {
                    x = y;
                    v += 1;
                }
                Err(_) => break,
            }
        }
        v
    }

    /// Principal unit test: residue 1 in the residue field F_p.
    pub fn is_principal_unit(&self) -> bool {
        let s: u128 = self
            .coeffs
            .iter()
            .fold(0u128, |acc, &c| (acc + c) % self.ctx.p as u128);
        s == 1
    }

    /// u^e for nonnegative e.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = LocalElement::one(&self.ctx);
        acc.acc = self.acc;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Random principal unit 1 + (zeta - 1) r with r uniform on the power
    /// basis mod p^m_work.
    pub fn random_principal_unit<R: Rng>(ctx: &Arc<LocalCtx>, rng: &mut R) -> Self {
        let mut r = LocalElement::zero(ctx);
        for c in r.coeffs.iter_mut() {
            *c = rng.gen_range(0..ctx.modulus);
        }
        let zeta_minus_1 = LocalElement::zeta_pow(ctx, 1).sub(&LocalElement::one(ctx));
        LocalElement::one(ctx).add(&zeta_minus_1.mul(&r))
    }

    /// Multiplicative inverse of a unit by Newton iteration on the residue
    /// inverse.
    pub fn inverse(&self) -> Result<Self> {
        // residue in F_p must be nonzero
        let s: u128 = self
            .coeffs
            .iter()
            .fold(0u128, |acc, &c| (acc + c) % self.ctx.p as u128);
        if s == 0 {
            return Err(Error::InvalidParam("not a unit in the local ring".into()));
        }
        // x_{k+1} = x_k (2 - u x_k), starting from the residue inverse
        let mut x = LocalElement::from_u128(&self.ctx, invm(s, self.ctx.p as u128));
        x.acc = self.acc;
        let two = LocalElement::from_u128(&self.ctx, 2);
        for _ in 0..(64 - (self.ctx.m_work as u64).leading_zeros() + 2) {
            x = x.mul(&two.sub(&self.mul(&x)));
        }
        debug_assert!(self.mul(&x).sub(&LocalElement::one(&self.ctx)).is_zero_at_acc());
        Ok(x)
    }
}

/// p-adic logarithm of a principal unit: pre-power by p^(n+1) to force the
/// convergence domain, sum the series, divide back. The declared accuracy
/// accounts for the division and the series' denominator losses.
pub fn padic_log(u: &LocalElement) -> Result<LocalElement> {
    if !u.is_principal_unit() {
        return Err(Error::InvalidParam("log needs a principal unit".into()));
    }
    let ctx = &u.ctx;
    let p = ctx.p;
    let s = ctx.n + 1;
    let up = u.pow((p as u64).pow(s));
    let x = up.sub(&LocalElement::one(ctx));
    // v_m(x) > e/(p-1) = p^n now; series converges with denominator losses
    // bounded by log_p(k_max)
    let e = ctx.e() as u64;
    let vmin = (p.pow(ctx.n) + 1) as u64;
    // fixed point: all k > k_max satisfy k vmin - e v_p(k) > e m_work
    let mut k_max = e * (ctx.m_work as u64 + 1) / vmin + 1;
    loop {
        let l = (64 - k_max.leading_zeros() as u64) / (63 - (p as u64).leading_zeros() as u64).max(1) + 2;
        let k2 = e * (ctx.m_work as u64 + 1 + l) / vmin + 1;
        if k2 <= k_max {
            break;
        }
        k_max = k2;
    }
    let mut term = x.clone(); // x^k
    let mut acc = LocalElement::zero(ctx);
    for k in 1..=k_max {
        // term / k with k = p^a k'
        let a = val_p_u64(k, p);
        let kp = k / (p as u64).pow(a);
        let t = term.div_p(a)?.scale(invm(kp as u128, ctx.modulus));
        if k % 2 == 1 {
            acc = acc.add(&t);
        } else {
            acc = acc.sub(&t);
        }
        if k < k_max {
            term = term.mul(&x);
        }
    }
    let mut out = acc.div_p(s)?;
    // total accuracy: m_work - s - max denominator loss in the series
    let series_loss = val_p_u64(largest_p_power_below(k_max, p), p);
    out.acc = ctx
        .m_work
        .saturating_sub(s + series_loss)
        .min(out.acc);
    Ok(out)
}

/// p-adic exponential for v_m(x) > e/(p-1); inverse of the log on its
/// domain.
pub fn padic_exp(x: &LocalElement) -> Result<LocalElement> {
    let ctx = &x.ctx;
    let p = ctx.p;
    let e = ctx.e() as u64;
    let vmin = p.pow(ctx.n) + 1;
    if x.val_uniformizer(vmin) < vmin {
        return Err(Error::Precision("exp outside convergence domain".into()));
    }
    // per-term valuation >= k vmin/e - v_p(k!) >= k (vmin - p^n)/e = k/e;
    // stop once k/e exceeds m_work with slack
    let k_max = e * (ctx.m_work as u64 + 2);
    let mut acc = LocalElement::one(ctx);
    let mut term = LocalElement::one(ctx);
    let mut fact_val: u32 = 0;
    for k in 1..=k_max {
        term = term.mul(x);
        fact_val += val_p_u64(k, p);
        // term / k! : divide incrementally by k each step
        let a = val_p_u64(k, p);
        let kp = k / (p as u64).pow(a);
        term = term.div_p(a)?.scale(invm(kp as u128, ctx.modulus));
        acc = acc.add(&term);
    }
    let mut out = acc;
    out.acc = ctx.m_work.saturating_sub(fact_val).min(out.acc);
    Ok(out)
}

fn val_p_u64(k: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut k = k;
    while k % p == 0 {
        k /= p;
        v += 1;
    }
    v
}

fn largest_p_power_below(k: u64, p: u64) -> u64 {
    let mut x = 1;
    while x * p <= k {
        x *= p;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn ring_basics() {
        let ctx = LocalCtx::new(3, 0, 8);
        assert_eq!(ctx.d, 2);
        let z = LocalElement::zeta_pow(&ctx, 1);
        // 1 + zeta + zeta^2 = 0
        let s = LocalElement::one(&ctx).add(&z).add(&z.mul(&z));
        assert!(s.is_zero_at_acc());
        // zeta^3 = 1
        assert!(z.pow(3).sub(&LocalElement::one(&ctx)).is_zero_at_acc());
    }

    #[test]
    fn traces_match_galois_sum() {
        for (p, n) in [(3u64, 1u32), (5, 1)] {
            let ctx = LocalCtx::new(p, n, 6);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
            for _ in 0..10 {
                let x = LocalElement::random_principal_unit(&ctx, &mut rng);
                let direct = x.trace();
                // sum over all Galois conjugates, coefficient of zeta^0...
                let mut s = LocalElement::zero(&ctx);
                for b in 1..ctx.pn1() {
                    if b % p != 0 {
                        s = s.add(&x.galois(b));
                    }
                }
                // the conjugate sum is rational: all non-constant coeffs 0
                for &c in &s.coeffs[1..] {
                    assert_eq!(c % ctx.modulus, 0);
                }
                assert_eq!(s.coeffs[0], direct);
            }
        }
    }

    #[test]
    fn uniformizer_division() {
        let ctx = LocalCtx::new(5, 0, 8);
        let z1 = LocalElement::zeta_pow(&ctx, 1).sub(&LocalElement::one(&ctx));
        let x = z1.mul(&z1).mul(&LocalElement::from_u128(&ctx, 7));
        assert_eq!(x.val_uniformizer(10), 2);
        let y = x.div_uniformizer().unwrap().div_uniformizer().unwrap();
        // y = 7
        assert_eq!(y.coeffs[0] % 5u128.pow(y.acc.min(4)), 7);
    }

    #[test]
    fn log_of_one_plus_p_at_p3() {
        // log(1+3) = 21 mod 27 in Z_3 (series: 3 - 9/2 + 9 - 0 ... = 21)
        let ctx = LocalCtx::new(3, 0, 10);
        let u = LocalElement::from_u128(&ctx, 4);
        let l = padic_log(&u).unwrap();
        assert!(l.acc >= 3, "acc = {}", l.acc);
        assert_eq!(l.coeffs[0] % 27, 21);
        for &c in &l.coeffs[1..] {
            assert_eq!(c % 27, 0);
        }
    }

    /// Independent oracle: direct series summation in plain Z/3^12 without
    /// pre-powering (x = 3 converges already).
    #[test]
    fn log_oracle_direct_series() {
        let m: u128 = 3u128.pow(12);
        let mut acc: i128 = 0;
        let x: i128 = 3;
        let mut xk: i128 = 1;
        for k in 1..=40i128 {
            xk = (xk * x) % m as i128;
            // term x^k / k
            let a = {
                let mut v = 0;
                let mut kk = k;
                while kk % 3 == 0 {
                    kk /= 3;
                    v += 1;
                }
                v
            };
            let kp = k / 3i128.pow(a as u32);
            let mut t = xk / 3i128.pow(a as u32);
            t = (t * invm(kp.rem_euclid(m as i128) as u128, m) as i128).rem_euclid(m as i128);
            if k % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
            acc = acc.rem_euclid(m as i128);
        }
        // compare mod 3^6 with the implementation
        let ctx = LocalCtx::new(3, 0, 12);
        let u = LocalElement::from_u128(&ctx, 4);
        let l = padic_log(&u).unwrap();
        assert!(l.acc >= 6);
        let m6 = 3u128.pow(6);
        assert_eq!(l.coeffs[0] % m6, (acc as u128) % m6);
    }

    #[test]
    fn log_is_a_homomorphism() {
        let ctx = LocalCtx::new(3, 1, 12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let u = LocalElement::random_principal_unit(&ctx, &mut rng);
            let v = LocalElement::random_principal_unit(&ctx, &mut rng);
            let l1 = padic_log(&u.mul(&v)).unwrap();
            let l2 = padic_log(&u).unwrap().add(&padic_log(&v).unwrap());
            let diff = l1.sub(&l2);
            let a = l1.acc.min(l2.acc);
            let pa = 3u128.pow(a);
            assert!(diff.coeffs.iter().all(|&c| c % pa == 0), "acc {a}");
            // log(u^p) = p log u
            let lp = padic_log(&u.pow(3)).unwrap();
            let threel = padic_log(&u).unwrap().scale(3);
            let d2 = lp.sub(&threel);
            let a2 = lp.acc.min(threel.acc) - 1;
            let pa2 = 3u128.pow(a2);
            assert!(d2.coeffs.iter().all(|&c| c % pa2 == 0));
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        for (p, n) in [(3u64, 0u32), (5, 0), (3, 1)] {
            let ctx = LocalCtx::new(p, n, 14);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
            for _ in 0..17 {
                let u0 = LocalElement::random_principal_unit(&ctx, &mut rng);
                // u = u0^(p^(n+1)) lies in the convergence domain
                let u = u0.pow((p as u64).pow(n + 1));
                let l = padic_log(&u).unwrap();
                let back = padic_exp(&l).unwrap();
                let diff = back.sub(&u);
                let a = back.acc.min(l.acc).saturating_sub(1);
                let pa = (p as u128).pow(a);
                assert!(
                    diff.coeffs.iter().all(|&c| c % pa == 0),
                    "p={p} n={n} acc={a}"
                );
            }
        }
    }

    #[test]
    fn log_kills_torsion() {
        let ctx = LocalCtx::new(3, 1, 10);
        // zeta is 1 mod the maximal ideal, and log(zeta) = 0
        let z = LocalElement::zeta_pow(&ctx, 1);
        assert!(z.is_principal_unit());
        let l = padic_log(&z).unwrap();
        assert!(l.is_zero_at_acc() || l.coeffs.iter().all(|&c| c % 3u128.pow(l.acc) == 0));
    }
}
