//! Double-double arithmetic (~31 significant digits) with just enough
//! transcendental support for Gauss sums and digamma series: exp, ln,
//! sin/cos at rational multiples of 2*pi.

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_ratio(n: i64, d: i64) -> Dd {
        Dd::from_f64(n as f64).div(Dd::from_f64(d as f64))
    }

    /// Exact for |n| < 2^106.
    pub fn from_i128(n: i128) -> Dd {
        let hi = n as f64;
        let lo = (n - hi as i128) as f64;
        Dd { hi, lo }
    }

    pub fn from_ratio_i128(n: i128, d: i128) -> Dd {
        Dd::from_i128(n).div(Dd::from_i128(d))
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2b) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2b + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// exp by argument scaling and Taylor series.
    pub fn exp(self) -> Dd {
        // e^x = (e^(x/2^k))^(2^k)
        let k = 16;
        let scale = (1u64 << k) as f64;
        let r = self.div(Dd::from_f64(scale));
        // Taylor on |r| <= ~1e-4
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for i in 1..24 {
            term = term.mul(r).div(Dd::from_f64(i as f64));
            sum = sum.add(term);
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        let mut y = sum;
        for _ in 0..k {
            y = y.mul(y);
        }
        y
    }

    /// Natural log via f64 seed and one dd correction step.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0);
        let a = Dd::from_f64(self.hi.ln());
        // r = x * exp(-a) - 1 is ~1e-16
        let r = self.mul(a.neg().exp()).sub(Dd::ONE);
        let r2 = r.mul(r);
        let corr = r.sub(r2.mul(Dd::from_f64(0.5))).add(r2.mul(r).div(Dd::from_f64(3.0)));
        a.add(corr)
    }
}

fn sin_taylor(x: Dd) -> Dd {
    let x2 = x.mul(x);
    let mut term = x;
    let mut sum = x;
    for i in 1..24 {
        let k = (2 * i) * (2 * i + 1);
        term = term.mul(x2).div(Dd::from_f64(k as f64)).neg();
        sum = sum.add(term);
        if term.hi.abs() < 1e-40 {
            break;
        }
    }
    sum
}

fn cos_taylor(x: Dd) -> Dd {
    let x2 = x.mul(x);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for i in 1..24 {
        let k = (2 * i - 1) * (2 * i);
        term = term.mul(x2).div(Dd::from_f64(k as f64)).neg();
        sum = sum.add(term);
        if term.hi.abs() < 1e-40 {
            break;
        }
    }
    sum
}

/// (cos, sin) of 2*pi*num/den, exact argument reduction on the rational.
pub fn cos_sin_2pi_ratio(num: i64, den: i64) -> (Dd, Dd) {
    assert!(den > 0);
    let num = num.rem_euclid(den);
    // reduce to the first octant using eighths of the circle
    // theta = 2 pi (num/den); work with t = num/den in [0,1)
    // use symmetry via quarter reductions: compute on [0, 1/4], then adjust
    let (q, num4) = ((4 * num) / den, (4 * num) % den); // quarter index and remainder
    // angle within quarter: 2 pi * num4 / (4 den) in [0, pi/2)
    let theta = Dd::PI.mul(Dd::from_f64(2.0)).mul(Dd::from_ratio(num4, 4 * den));
    // split the quarter at pi/4 for Taylor accuracy
    let (c, s) = if 2 * num4 <= den {
        (cos_taylor(theta), sin_taylor(theta))
    } else {
        let phi = Dd::PI.mul(Dd::from_f64(0.5)).sub(theta);
        (sin_taylor(phi), cos_taylor(phi))
    };
    match q {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };
    pub const I: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ONE,
    };

    pub fn from_f64(re: f64, im: f64) -> Cdd {
        Cdd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    /// exp(2 pi i k / m).
    pub fn root_of_unity(k: i64, m: i64) -> Cdd {
        let (c, s) = cos_sin_2pi_ratio(k, m);
        Cdd { re: c, im: s }
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    pub fn neg(self) -> Cdd {
        Cdd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn conj(self) -> Cdd {
        Cdd {
            re: self.re,
            im: self.im.neg(),
        }
    }

    pub fn scale(self, s: Dd) -> Cdd {
        Cdd {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub fn div(self, o: Cdd) -> Cdd {
        let n2 = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(o.conj());
        Cdd {
            re: num.re.div(n2),
            im: num.im.div(n2),
        }
    }

    pub fn abs(self) -> f64 {
        let n2 = self.re.mul(self.re).add(self.im.mul(self.im));
        n2.to_f64().sqrt()
    }
}

/// Digamma by Euler-Maclaurin with 20 Bernoulli correction terms: shift x
/// up by N, then psi(y) ~ ln y - 1/(2y) - sum B_{2k}/(2k y^{2k}).
pub fn digamma(x: Dd) -> Dd {
    // B_{2k} for k = 1..20
    const B2K: [(i128, i128); 20] = [
        (1, 6),
        (-1, 30),
        (1, 42),
        (-1, 30),
        (5, 66),
        (-691, 2730),
        (7, 6),
        (-3617, 510),
        (43867, 798),
        (-174611, 330),
        (854513, 138),
        (-236364091, 2730),
        (8553103, 6),
        (-23749461029, 870),
        (8615841276005, 14322),
        (-7709321041217, 510),
        (2577687858367, 6),
        (-26315271553053477373, 1919190),
        (2929993913841559, 6),
        (-261082718496449122051, 13530),
    ];
    let n = 40i64;
    let mut acc = Dd::ZERO;
    let mut y = x;
    for _ in 0..n {
        acc = acc.sub(Dd::ONE.div(y));
        y = y.add(Dd::ONE);
    }
    // psi(y) with y = x + N
    let mut s = y.ln().sub(Dd::from_f64(0.5).div(y));
    let y2 = Dd::ONE.div(y.mul(y));
    let mut ypow = y2;
    for (k, (bn, bd)) in B2K.iter().enumerate() {
        let term = Dd::from_ratio_i128(*bn, *bd)
            .div(Dd::from_f64(2.0 * (k as f64 + 1.0)))
            .mul(ypow);
        s = s.sub(term);
        ypow = ypow.mul(y2);
    }
    acc.add(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_basics() {
        let a = Dd::from_ratio(1, 3);
        let b = Dd::from_ratio(1, 6);
        let s = a.add(b).mul(Dd::from_f64(2.0));
        assert!((s.to_f64() - 1.0).abs() < 1e-30);
        let q = Dd::ONE.div(Dd::from_f64(7.0)).mul(Dd::from_f64(7.0));
        assert!((q.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn exp_and_ln() {
        let x = Dd::from_ratio(3, 7);
        let y = x.exp().ln();
        assert!((y.sub(x)).to_f64().abs() < 1e-27);
        assert!((Dd::ONE.exp().to_f64() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity() {
        // sum of all m-th roots is 0; |root| = 1
        for m in [3i64, 5, 7, 12, 40] {
            let mut s = Cdd::ZERO;
            for k in 0..m {
                let r = Cdd::root_of_unity(k, m);
                assert!((r.abs() - 1.0).abs() < 1e-28);
                s = s.add(r);
            }
            assert!(s.abs() < 1e-28, "m={m}: |sum| = {}", s.abs());
        }
        // exactness of the quarter points
        let r = Cdd::root_of_unity(1, 4);
        assert!(r.re.to_f64().abs() < 1e-30 && (r.im.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn digamma_known_values() {
        // psi(1) = -gamma
        let g = 0.577_215_664_901_532_9;
        assert!((digamma(Dd::ONE).to_f64() + g).abs() < 1e-14);
        // psi(1/2) = -gamma - 2 ln 2
        let v = digamma(Dd::from_ratio(1, 2)).to_f64();
        assert!((v + g + 2.0 * std::f64::consts::LN_2).abs() < 1e-13);
    }
}
