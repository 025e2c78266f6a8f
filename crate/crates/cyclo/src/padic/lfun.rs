//! p-adic L-function truncations: the omega^j-component of the level-n
//! Stickelberger element as an element of Z_p[Gamma(n)], rewritten as a
//! polynomial truncation mod ((1+T)^(p^n) - 1, p^M), with lambda/mu read
//! off when stable across levels.

use std::collections::HashMap;

use crate::arith::{invm, mulm, powm, teichmuller};
use crate::{Error, Result};

/// Coefficients of the branch-j truncation at level n.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PowerSeriesTruncation {
    pub p: u64,
    pub j: u64,
    pub n: u32,
    pub m_exp: u32,
    /// Coefficients on the group basis gamma(n)^t, t = 0..p^n.
    pub gamma_coeffs: Vec<u128>,
    /// Coefficients a_i of the T-basis rewrite sum c_t (1+T)^t.
    pub t_coeffs: Vec<u128>,
}

/// theta_{n,j}: the omega^(1-j)-eigencomponent data of theta_n,
/// theta_{n,j} = -sum_a (a/p^(n+1) - 1/2) omega^(j-1)(a) gamma_a^{-1}
/// over Z/p^m_exp[Gamma(n)], where a = omega(a) <a> and <a> = (1+p)^t(a).
/// Integral for even j != 0 mod (p-1).
pub fn theta_nj(p: u64, j: u64, n: u32, m_exp: u32) -> Result<Vec<u128>> {
    if j == 0 || j % 2 != 0 || j > p - 3 {
        return Err(Error::InvalidParam(
            "need even j with 2 <= j <= p-3 (j=0 component vanishes)".into(),
        ));
    }
    let work_exp = m_exp + n + 1;
    let modulus = (p as u128).pow(work_exp);
    assert!(modulus < (1 << 62), "working modulus too large");
    let pn1 = p.pow(n + 1);
    let pn = p.pow(n);
    // discrete log table for (1+p)^t mod p^(n+1)
    let mut dlog: HashMap<u64, u64> = HashMap::new();
    let mut x = 1u64;
    for t in 0..pn {
        dlog.insert(x, t);
        x = ((x as u128 * (1 + p) as u128) % pn1 as u128) as u64;
    }
    // omega on residues mod p at working precision
    let omega: Vec<u128> = (0..p).map(|a| teichmuller(a, p, modulus)).collect();
    let mut acc = vec![0u128; pn as usize];
    for a in 1..pn1 {
        if a % p == 0 {
            continue;
        }
        let w = omega[(a % p) as usize];
        // <a> = a / omega(a) mod p^(n+1)
        let w_mod = (w % pn1 as u128) as u64;
        let a_unit = ((a as u128 * invm(w_mod as u128, pn1 as u128)) % pn1 as u128) as u64;
        let t = *dlog.get(&a_unit).expect("unit part is in 1 + pZ");
        // coefficient -(a/p^(n+1) - 1/2) = (p^(n+1) - 2a) / (2 p^(n+1)):
        // accumulate the numerator times omega^(j-1)(a) at slot -t
        let wj = powm(w, (j - 1) as u128, modulus);
        let num = ((pn1 as i128 - 2 * a as i128).rem_euclid(modulus as i128)) as u128;
        let slot = ((pn - t) % pn) as usize;
        acc[slot] = (acc[slot] + mulm(num, wj, modulus)) % modulus;
    }
    // divide by 2 p^(n+1)
    let pk = (p as u128).pow(n + 1);
    let inv2 = invm(2, modulus);
    let out_mod = (p as u128).pow(m_exp);
    let mut out = Vec::with_capacity(pn as usize);
    for c in acc {
        if c % pk != 0 {
            return Err(Error::Precision(
                "theta_{n,j} numerator not divisible by p^(n+1)".into(),
            ));
        }
        out.push(mulm(c / pk, inv2, modulus) % out_mod);
    }
    Ok(out)
}

/// Rewrite sum c_t gamma^t as a polynomial in T = gamma - 1:
/// a_i = sum_t c_t C(t, i) mod p^m_exp.
fn gamma_to_t_basis(coeffs: &[u128], p: u64, m_exp: u32) -> Vec<u128> {
    let modulus = (p as u128).pow(m_exp);
    let len = coeffs.len();
    let mut out = vec![0u128; len];
    // iterate rows of Pascal's triangle
    let mut row: Vec<u128> = vec![1];
    for (t, &c) in coeffs.iter().enumerate() {
        if t > 0 {
            let mut next = vec![1u128; t + 1];
            for i in 1..t {
                next[i] = (row[i - 1] + row[i]) % modulus;
            }
            row = next;
        }
        if c != 0 {
            for (i, &b) in row.iter().enumerate() {
                out[i] = (out[i] + mulm(c, b, modulus)) % modulus;
            }
        }
    }
    out
}

/// Build the truncation of the branch-j p-adic L-series at level n.
pub fn padic_l_truncation(p: u64, j: u64, n: u32, m_exp: u32) -> Result<PowerSeriesTruncation> {
    let gamma_coeffs = theta_nj(p, j, n, m_exp)?;
    let t_coeffs = gamma_to_t_basis(&gamma_coeffs, p, m_exp);
    Ok(PowerSeriesTruncation {
        p,
        j,
        n,
        m_exp,
        gamma_coeffs,
        t_coeffs,
    })
}

/// Level coherence: the projection Gamma(n+1) -> Gamma(n) must carry
/// theta_{n+1,j} to theta_{n,j} (t mod p^n), compared mod p^min.
pub fn coherence_check(p: u64, j: u64, n: u32, m_exp: u32) -> Result<bool> {
    let hi = theta_nj(p, j, n + 1, m_exp)?;
    let lo = theta_nj(p, j, n, m_exp)?;
    let pn = p.pow(n) as usize;
    let modulus = (p as u128).pow(m_exp);
    let mut proj = vec![0u128; pn];
    for (t, &c) in hi.iter().enumerate() {
        proj[t % pn] = (proj[t % pn] + c) % modulus;
    }
    Ok(proj == lo)
}

/// lambda/mu reading of a truncation: mu* = min coefficient valuation,
/// lambda* = first index attaining it.
fn read_lambda_mu(tr: &PowerSeriesTruncation) -> (u32, usize) {
    let mut mu = tr.m_exp;
    let mut lambda = tr.t_coeffs.len();
    for (i, &c) in tr.t_coeffs.iter().enumerate() {
        let v = crate::arith::val_p(c, tr.p, tr.m_exp);
        if v < mu {
            mu = v;
            lambda = i;
        }
    }
    (mu, lambda)
}

#[derive(Debug, serde::Serialize)]
pub struct LambdaMuReport {
    pub p: u64,
    pub j: u64,
    pub mu: u32,
    pub lambda: usize,
    pub levels: (u32, u32),
    pub coherent: bool,
}

/// lambda/mu from truncations at two consecutive levels; errors with
/// "insufficient level" when the readings disagree or lambda touches the
/// truncation boundary.
pub fn lambda_mu_stable(p: u64, j: u64, n: u32, m_exp: u32) -> Result<LambdaMuReport> {
    let t1 = padic_l_truncation(p, j, n, m_exp)?;
    let t2 = padic_l_truncation(p, j, n + 1, m_exp)?;
    let (mu1, l1) = read_lambda_mu(&t1);
    let (mu2, l2) = read_lambda_mu(&t2);
    let coherent = coherence_check(p, j, n, m_exp)?;
    if mu1 != mu2 || l1 != l2 || l1 + 1 >= t1.t_coeffs.len() {
        return Err(Error::Precision(format!(
            "insufficient level for stable lambda/mu: ({mu1},{l1}) vs ({mu2},{l2})"
        )));
    }
    Ok(LambdaMuReport {
        p,
        j,
        mu: mu1,
        lambda: l1,
        levels: (n, n + 1),
        coherent,
    })
}

/// v_p(B_{1, omega^{-1}}): computed as v_p(sum_a omega^{-1}(a) a) - 1 and
/// asserted to equal -1.
pub fn b1_omega_inverse_valuation(p: u64) -> Result<i32> {
    let modulus = (p as u128).pow(3);
    let mut s: u128 = 0;
    for a in 1..p {
        let w = teichmuller(a, p, modulus);
        let winv = invm(w, modulus);
        s = (s + mulm(winv, a as u128, modulus)) % modulus;
    }
    if s % p as u128 == 0 {
        return Err(Error::InvalidParam(
            "B_{1,omega^{-1}} numerator unexpectedly divisible by p".into(),
        ));
    }
    Ok(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn rejects_bad_branch() {
        assert!(theta_nj(5, 0, 0, 4).is_err());
        assert!(theta_nj(5, 3, 0, 4).is_err());
        assert!(theta_nj(3, 2, 0, 4).is_err(), "p=3 has no even j in [2, p-3]");
    }

    #[test]
    fn regular_prime_branch_is_a_unit_series() {
        // p=5, j=2: mu = lambda = 0
        let rep = lambda_mu_stable(5, 2, 1, 6).unwrap();
        assert_eq!((rep.mu, rep.lambda), (0, 0), "{rep:?}");
        assert!(rep.coherent);
    }

    #[test]
    fn level_zero_value_interpolates_bernoulli() {
        // f_j(0) = L_p(0, omega^j) = -B_{1, omega^{j-1}} = -B_j / j mod p
        // (Kummer congruence); check for p=5, j=2 and p=7, j in {2,4}
        for (p, j) in [(5u64, 2u64), (7, 2), (7, 4)] {
            let tr = padic_l_truncation(p, j, 1, 4).unwrap();
            let a0 = tr.t_coeffs[0] % p as u128;
            let bern = crate::classgrp::bernoulli_numbers(j as usize);
            let bj = &bern[j as usize];
            let num = bj.numer();
            let den = bj.denom();
            let pb = num_bigint::BigInt::from(p);
            let num_m: u128 = (((num % &pb) + &pb) % &pb).try_into().unwrap();
            let den_m: u128 = (((den % &pb) + &pb) % &pb).try_into().unwrap();
            assert!(!(&pb - 1u32).is_zero());
            let bj_mod = mulm(num_m, invm(den_m, p as u128), p as u128);
            let want = (p as u128 - mulm(bj_mod, invm(j as u128, p as u128), p as u128)) % p as u128;
            assert_eq!(a0, want, "p={p} j={j}: a_0 = -B_j/j mod p");
        }
    }

    #[test]
    fn b1_omega_valuations() {
        for p in [3u64, 5, 7, 37] {
            assert_eq!(b1_omega_inverse_valuation(p).unwrap(), -1);
        }
    }

    #[test]
    fn coherence_small() {
        assert!(coherence_check(5, 2, 0, 4).unwrap());
        assert!(coherence_check(7, 4, 0, 4).unwrap());
    }
}
