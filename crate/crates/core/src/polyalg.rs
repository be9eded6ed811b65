//! Dense univariate polynomials over `Z_q`, ascending coefficients, with
//! trailing zeros trimmed. The zero polynomial is the empty vector.

use crate::ring::modulus::inv_mod;

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn reduce(a: &[u64], q: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| x % q).collect())
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&x| x != 0)
}

pub(crate) fn add(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
        *o = x % q;
    }
    trim(out)
}

pub(crate) fn sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0) % q + q - b.get(i).copied().unwrap_or(0) % q;
        *o = x % q;
    }
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y % q) % q;
        }
    }
    trim(out)
}

pub(crate) fn scale(a: &[u64], k: u64, q: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| x * (k % q) % q).collect())
}

/// Division by a polynomial whose leading coefficient is a unit mod `q`.
pub(crate) fn divrem(a: &[u64], b: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db] % q, q).expect("leading coefficient is a unit");
    let mut rem = reduce(a, q);
    let mut quot = vec![0u64; rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = rem[dr] * inv % q;
        let shift = dr - db;
        quot[shift] = c;
        for (k, &bk) in b.iter().enumerate().take(db + 1) {
            let idx = shift + k;
            rem[idx] = (rem[idx] + q - c * bk % q) % q;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub(crate) fn make_monic(a: &[u64], p: u64) -> Vec<u64> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = inv_mod(a[d], p).expect("field element");
            scale(a, inv, p)
        }
    }
}

/// Monic gcd over the field `F_p`.
pub(crate) fn gcd_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (reduce(a, p), reduce(b, p));
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g`, `g` the monic gcd over `F_p`.
pub(crate) fn ext_gcd_fp(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (quot, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&quot, &s1, p), p);
        let t = sub(&t0, &mul(&quot, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let d = degree(&r0).expect("not both zero");
    let inv = inv_mod(r0[d], p).expect("field element");
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

/// `x^n - 1` over `Z_q`.
pub(crate) fn x_n_minus_1(n: usize, q: u64) -> Vec<u64> {
    let mut out = vec![0u64; n + 1];
    out[0] = q - 1;
    out[n] = 1;
    out
}
