//! Small integer number theory used throughout: modular arithmetic on `u128`,
//! primality by trial division (desk scale), factorization, Euler phi,
//! divisors, integer square roots and the Kronecker symbol.

/// a*b mod m without overflow for m < 2^63.
#[inline]
pub fn mulm(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m < (1 << 63));
    (a % m) * (b % m) % m
}

/// a^e mod m for m < 2^63.
pub fn powm(mut a: u128, mut e: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    a %= m;
    let mut r: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, m);
        }
        a = mulm(a, a, m);
        e >>= 1;
    }
    r
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd over signed integers: returns (g, x, y) with a*x + b*y = g.
pub fn extgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = extgcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of a mod m; panics if not coprime.
pub fn invm(a: u128, m: u128) -> u128 {
    let (g, x, _) = extgcd((a % m) as i128, m as i128);
    assert!(g == 1, "invm: {a} not invertible mod {m}");
    x.rem_euclid(m as i128) as u128
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Factorization as (prime, exponent) pairs, ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for (p, _) in factor(n) {
        r = r / p * (p - 1);
    }
    r
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Floor of sqrt(n).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as u128, b as u128) as u64 * b
}

/// Kronecker symbol (a/n).
pub fn kronecker(mut a: i64, mut n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out twos from n
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (2/a) = (-1)^((a^2-1)/8), applied `twos` times
        let m8 = a.rem_euclid(8);
        if twos % 2 == 1 && (m8 == 3 || m8 == 5) {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    // now n odd positive, 0 <= a < n: Jacobi
    while a != 0 {
        let mut t = 0;
        while a % 2 == 0 {
            a /= 2;
            t += 1;
        }
        let n8 = n.rem_euclid(8);
        if t % 2 == 1 && (n8 == 3 || n8 == 5) {
            result = -result;
        }
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        let tmp = a;
        a = n % tmp;
        n = tmp;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Smallest primitive root modulo an odd prime p.
pub fn smallest_primitive_root(p: u64) -> u64 {
    assert!(is_prime(p) && p > 2);
    let fac = factor(p - 1);
    'outer: for r in 2..p {
        for (q, _) in &fac {
            if powm(r as u128, ((p - 1) / q) as u128, p as u128) == 1 {
                continue 'outer;
            }
        }
        return r;
    }
    unreachable!("no primitive root found")
}

/// Multiplicative order of a modulo m (a coprime to m).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let group = euler_phi(m);
    let mut ord = group;
    for (q, _) in factor(group) {
        while ord % q == 0 && powm(a as u128, (ord / q) as u128, m as u128) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Teichmueller lift of a modulo p^m: the unique (p-1)st root of unity
/// congruent to a mod p, i.e. a^(p^(m-1)) mod p^m.
pub fn teichmuller(a: u64, p: u64, modulus: u128) -> u128 {
    let mut x = (a as u128) % modulus;
    // iterate x -> x^p; converges to the Teichmueller representative
    for _ in 0..128 {
        let y = powm(x, p as u128, modulus);
        if y == x {
            break;
        }
        x = y;
    }
    x
}

/// p-adic valuation of x as an element of Z/m (m a power of p); returns
/// the working exponent of m when x == 0.
pub fn val_p(x: u128, p: u64, m_exp: u32) -> u32 {
    if x == 0 {
        return m_exp;
    }
    let mut v = 0;
    let mut y = x;
    while y % p as u128 == 0 {
        y /= p as u128;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_phi() {
        assert!(is_prime(2) && is_prime(37) && !is_prime(1) && !is_prime(91));
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn modular() {
        assert_eq!(powm(2, 10, 1000), 24);
        assert_eq!(invm(3, 25) * 3 % 25, 1);
        assert_eq!(mult_order(2, 9), 6);
        assert_eq!(smallest_primitive_root(3), 2);
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(smallest_primitive_root(37), 2);
    }

    #[test]
    fn teich() {
        // omega(2) mod 9 for p=3 is -1 = 8
        assert_eq!(teichmuller(2, 3, 9), 8);
        // omega of a (p-1)-st root is itself: omega(1)=1
        assert_eq!(teichmuller(1, 5, 125), 1);
        // omega(a) == a mod p
        for a in 1..5 {
            assert_eq!(teichmuller(a, 5, 3125) % 5, a as u128);
        }
    }

    #[test]
    fn kronecker_basics() {
        // (5/.) has period 5: residues 1,4 -> 1; 2,3 -> -1
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(5, 11), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(12, 11), 1);
    }
}
