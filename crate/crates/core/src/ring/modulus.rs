use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime power `p^e`, the coefficient ring of one CRT component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Self {
        PrimePower { p, e }
    }

    /// `p^e`.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// `p^k` for `k <= e`.
    pub fn pow(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    /// p-adic valuation of `x` in `Z_{p^e}`; returns `e` for zero.
    pub fn valuation(&self, x: u64) -> u32 {
        let q = self.modulus();
        let mut x = x % q;
        if x == 0 {
            return self.e;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }
}

/// The composite modulus `m = prod p_i^{e_i}` with every `e_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modulus {
    m: u64,
    factors: Vec<PrimePower>,
    m_prime: u64,
}

impl Modulus {
    /// Factors `m` by trial division and checks that every exponent is at
    /// least 2. Does not look at the code length; see [`validate_modulus`].
    pub fn new(m: u64) -> Result<Self> {
        if !(2..(1u64 << 32)).contains(&m) {
            return Err(Error::InvalidModulus(m));
        }
        let factors = factorize(m);
        if let Some(f) = factors.iter().find(|f| f.e < 2) {
            return Err(Error::NotComposite { m, p: f.p });
        }
        let m_prime = factors.iter().map(|f| f.p).product();
        Ok(Modulus { m, factors, m_prime })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The data alphabet size `m' = prod p_i`.
    pub fn m_prime(&self) -> u64 {
        self.m_prime
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    /// Number of prime factors.
    pub fn ell(&self) -> usize {
        self.factors.len()
    }

    pub fn component(&self, i: usize) -> Result<PrimePower> {
        self.factors.get(i).copied().ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.factors.len(),
        })
    }
}

/// Validates the standing assumptions on `(m, n)`: every prime exponent of
/// `m` is at least 2 and `gcd(m, n) = 1`.
pub fn validate_modulus(m: u64, n: usize) -> Result<Modulus> {
    if n == 0 {
        return Err(Error::InvalidParams("code length n must be positive".into()));
    }
    let modulus = Modulus::new(m)?;
    let g = gcd(m, n as u64);
    if g != 1 {
        return Err(Error::GcdViolation { m, n, gcd: g });
    }
    Ok(modulus)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn factorize(mut m: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push(PrimePower { p, e });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(PrimePower { p: m, e: 1 });
    }
    out
}

/// Inverse of a unit `a` modulo `q`. Returns `None` when `gcd(a, q) != 1`.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % q as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(q as i128) as u64)
}

/// Reduces a signed integer into `[0, q)`.
pub fn reduce_signed(x: i64, q: u64) -> u64 {
    x.rem_euclid(q as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_36_with_length_5() {
        let m = validate_modulus(36, 5).unwrap();
        assert_eq!(m.m(), 36);
        assert_eq!(m.factors(), &[PrimePower::new(2, 2), PrimePower::new(3, 2)]);
        assert_eq!(m.m_prime(), 6);
        assert_eq!(m.ell(), 2);
    }

    #[test]
    fn rejects_shared_factor_with_length() {
        assert_eq!(
            validate_modulus(36, 6),
            Err(Error::GcdViolation { m: 36, n: 6, gcd: 6 })
        );
    }

    #[test]
    fn rejects_squarefree_prime() {
        assert_eq!(validate_modulus(12, 5), Err(Error::NotComposite { m: 12, p: 3 }));
        assert!(matches!(validate_modulus(7, 2), Err(Error::NotComposite { .. })));
    }

    #[test]
    fn valuations() {
        let pp = PrimePower::new(3, 3);
        assert_eq!(pp.valuation(0), 3);
        assert_eq!(pp.valuation(27), 3);
        assert_eq!(pp.valuation(9), 2);
        assert_eq!(pp.valuation(18), 2);
        assert_eq!(pp.valuation(5), 0);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(5, 36), Some(29));
        assert_eq!(inv_mod(6, 36), None);
        for a in 1..27 {
            if a % 3 != 0 {
                assert_eq!(a * inv_mod(a, 27).unwrap() % 27, 1);
            }
        }
    }
}
