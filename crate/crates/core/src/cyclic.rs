//! Cyclic codes: ideals of `Z_{p^e}[x]/(x^n - 1)` with `gcd(p, n) = 1`.
//!
//! Every such ideal has a generating set in standard form
//! `{p^{a_0} g_{a_0}, ..., p^{a_s} g_{a_s}}` with `a_0 < ... < a_s`, each
//! `g_{a_j}` a monic divisor of `x^n - 1` and
//! `g_{a_s} | ... | g_{a_0}`. The set is read off the torsion codes of the
//! linear expansion: `g_a` is the Hensel lift of the generator polynomial
//! of `Tor_a(C) = { v mod p : p^a v in C }`.

use serde::{Deserialize, Serialize};

use crate::chain::ChainCode;
use crate::error::{Error, Result};
use crate::polyalg as pa;
use crate::ring::poly::check_ring;
use crate::ring::{Modulus, PrimePower, ResidueMatrix, RingPoly};
use crate::zm::ZmCode;

/// `n x n` matrix whose row `t` holds the coefficients of `x^t g(x)`.
pub fn circulant_expand(g: &RingPoly) -> ResidueMatrix {
    let n = g.n();
    let mut out = ResidueMatrix::zeros(n, n, g.modulus());
    for t in 0..n {
        for (k, &c) in g.coeffs().iter().enumerate() {
            out.set(t, (k + t) % n, c);
        }
    }
    out
}

/// Circulant expansions of several generators, stacked.
pub fn stacked_circulants(gens: &[RingPoly], n: usize, q: u64) -> Result<ResidueMatrix> {
    let mut out = ResidueMatrix::zeros(0, n, q);
    for g in gens {
        if g.n() != n || g.modulus() % q != 0 {
            return Err(Error::ShapeMismatch(format!(
                "generator of length {} over Z_{} for length {n} over Z_{q}",
                g.n(),
                g.modulus()
            )));
        }
        out = out.vstack(&circulant_expand(&g.reduce(q)))?;
    }
    Ok(out)
}

/// The cyclic code `<g>` over `Z_m`, as a bundle of its projections.
pub fn ideal_code(g: &RingPoly, modulus: &Modulus) -> Result<ZmCode> {
    if g.modulus() != modulus.m() {
        return Err(Error::ShapeMismatch("generator is not over Z_m".into()));
    }
    ZmCode::from_generator(&circulant_expand(g), modulus)
}

/// One term `p^a g_a(x)` of a generating set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenTerm {
    pub a: u32,
    /// Monic. The zero element stands for `x^n - 1` itself.
    pub g: RingPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicGenSet {
    ring: PrimePower,
    n: usize,
    terms: Vec<GenTerm>,
}

impl CyclicGenSet {
    pub fn ring(&self) -> PrimePower {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Empty for the zero ideal.
    pub fn terms(&self) -> &[GenTerm] {
        &self.terms
    }

    /// The elements `p^{a_j} g_{a_j}` of the set.
    pub fn elements(&self) -> Vec<RingPoly> {
        self.terms
            .iter()
            .map(|t| t.g.scale(self.ring.pow(t.a)))
            .collect()
    }

    /// Checks strictly increasing valuations, strictly decreasing monic
    /// degrees and the divisibility chain down to `x^n - 1`.
    pub fn check(&self) -> Result<()> {
        let q = self.ring.modulus();
        let mut prev = pa::x_n_minus_1(self.n, q);
        let mut prev_a = None;
        for t in &self.terms {
            if t.a >= self.ring.e || prev_a.is_some_and(|a| t.a <= a) {
                return Err(Error::ChainViolation(format!("valuation {} out of order", t.a)));
            }
            let g = pa::trim(t.g.coeffs().to_vec());
            let d = pa::degree(&g).ok_or_else(|| Error::ChainViolation("zero term".into()))?;
            if g[d] != 1 || d >= pa::degree(&prev).unwrap() {
                return Err(Error::ChainViolation(format!("term of degree {d} breaks the chain")));
            }
            if !pa::divrem(&prev, &g, q).1.is_empty() {
                return Err(Error::ChainViolation("divisibility chain fails".into()));
            }
            prev = g;
            prev_a = Some(t.a);
        }
        Ok(())
    }
}

/// A generating set in standard form for `<gens>`.
pub fn standard_genset(gens: &[RingPoly], ring: PrimePower) -> Result<CyclicGenSet> {
    Ok(CyclicCode::from_generators(gens, ring)?.genset)
}

/// `sum_j p^{a_j} g_{a_j}(x)`, a single generator of the ideal.
pub fn generator_polynomial(set: &CyclicGenSet) -> RingPoly {
    let q = set.ring.modulus();
    set.elements()
        .iter()
        .fold(RingPoly::zero(set.n, q), |acc, x| acc.add(x).expect("same ring"))
}

/// The non-free part `<p^{a_j} g_{a_j} : a_j > 0>`; the whole ideal when
/// `a_0 > 0`, the zero ideal when the code is free.
pub fn nf_cyclic(set: &CyclicGenSet) -> Result<CyclicCode> {
    let elems = set.elements();
    let keep: Vec<RingPoly> = match set.terms.first() {
        Some(t) if t.a > 0 => elems,
        _ => elems.into_iter().zip(&set.terms).filter(|(_, t)| t.a > 0).map(|(x, _)| x).collect(),
    };
    if keep.is_empty() {
        return CyclicCode::zero(set.ring, set.n);
    }
    CyclicCode::from_generators(&keep, set.ring)
}

/// The Hensel lift of a monic divisor `f` of `x^n - 1` over `F_p`, as a
/// dense polynomial over `Z_{p^e}` (ascending coefficients).
///
/// Quadratic lifting of `x^n - 1 = f h` together with Bezout cofactors
/// `s f + t h = 1`; precision goes `p, p^2, p^4, ...` up to `p^e`.
pub fn hensel_lift_dense(f: &[u64], n: usize, ring: PrimePower) -> Result<Vec<u64>> {
    check_ring(n, ring.p)?;
    let p = ring.p;
    let f = pa::reduce(f, p);
    match pa::degree(&f) {
        Some(d) if f[d] == 1 => {}
        _ => return Err(Error::InvalidParams("Hensel lifting needs a monic polynomial".into())),
    }
    let (h, r) = pa::divrem(&pa::x_n_minus_1(n, p), &f, p);
    if !r.is_empty() {
        return Err(Error::NotADivisor);
    }
    let (one, s, t) = pa::ext_gcd_fp(&f, &h, p);
    debug_assert_eq!(one, vec![1]);

    let (mut g, mut h, mut s, mut t) = (f, h, s, t);
    let mut k = 1;
    while k < ring.e {
        let k2 = (2 * k).min(ring.e);
        let qk = ring.pow(k2);
        let err = pa::sub(&pa::x_n_minus_1(n, qk), &pa::mul(&g, &h, qk), qk);
        let (quot, rem) = pa::divrem(&pa::mul(&s, &err, qk), &h, qk);
        let g2 = pa::add(&pa::add(&g, &pa::mul(&t, &err, qk), qk), &pa::mul(&quot, &g, qk), qk);
        let h2 = pa::add(&h, &rem, qk);
        let b = pa::sub(&pa::add(&pa::mul(&s, &g2, qk), &pa::mul(&t, &h2, qk), qk), &[1], qk);
        let (c, dd) = pa::divrem(&pa::mul(&s, &b, qk), &h2, qk);
        s = pa::sub(&s, &dd, qk);
        t = pa::sub(&pa::sub(&t, &pa::mul(&t, &b, qk), qk), &pa::mul(&c, &g2, qk), qk);
        g = g2;
        h = h2;
        k = k2;
    }
    Ok(g)
}

/// [`hensel_lift_dense`] as a ring element. Lifting `x^n - 1` itself
/// yields zero, which generates the same ideal.
pub fn hensel_lift_poly(f: &[u64], n: usize, ring: PrimePower) -> Result<RingPoly> {
    let g = hensel_lift_dense(f, n, ring)?;
    Ok(dense_to_ring(&g, n, ring.modulus()))
}

fn dense_to_ring(g: &[u64], n: usize, q: u64) -> RingPoly {
    let mut c = vec![0u64; n];
    for (k, &x) in g.iter().enumerate() {
        c[k % n] = (c[k % n] + x) % q;
    }
    RingPoly::from_residues(c, q)
}

/// A cyclic code over `Z_{p^e}` with its generating set and its linear
/// expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicCode {
    genset: CyclicGenSet,
    linear: ChainCode,
}

impl CyclicCode {
    pub fn zero(ring: PrimePower, n: usize) -> Result<Self> {
        check_ring(n, ring.p)?;
        Ok(CyclicCode {
            genset: CyclicGenSet { ring, n, terms: Vec::new() },
            linear: ChainCode::zero(ring, n),
        })
    }

    /// The ideal generated by `gens`, each over `Z_{p^e}` or over a
    /// multiple of it (reduced on entry).
    pub fn from_generators(gens: &[RingPoly], ring: PrimePower) -> Result<Self> {
        let Some(first) = gens.first() else {
            return Err(Error::InvalidParams("no generators given".into()));
        };
        let n = first.n();
        check_ring(n, ring.p)?;
        let q = ring.modulus();
        let linear = ChainCode::from_generator(&stacked_circulants(gens, n, q)?, ring)?;
        let genset = extract_genset(&linear, ring, n)?;
        genset.check()?;
        let rebuilt = if genset.terms.is_empty() {
            ChainCode::zero(ring, n)
        } else {
            ChainCode::from_generator(&stacked_circulants(&genset.elements(), n, q)?, ring)?
        };
        if !rebuilt.row_span_equal(&linear) {
            return Err(Error::ChainViolation("generating set spans a different ideal".into()));
        }
        Ok(CyclicCode { genset, linear })
    }

    pub fn genset(&self) -> &CyclicGenSet {
        &self.genset
    }

    /// The code as a linear code over `Z_{p^e}`.
    pub fn linear(&self) -> &ChainCode {
        &self.linear
    }

    pub fn contains(&self, c: &RingPoly) -> bool {
        self.linear.contains(c.coeffs())
    }

    pub fn generator_polynomial(&self) -> RingPoly {
        generator_polynomial(&self.genset)
    }

    pub fn non_free_part(&self) -> Result<CyclicCode> {
        nf_cyclic(&self.genset)
    }

    pub fn is_free(&self) -> bool {
        is_free_cyclic(self)
    }
}

/// Free iff the generating set is empty or a single term with `a_0 = 0`.
pub fn is_free_cyclic(c: &CyclicCode) -> bool {
    match c.genset.terms.as_slice() {
        [] => true,
        [t] => t.a == 0,
        _ => false,
    }
}

/// A cyclic code is a Hensel lift exactly when it is free.
pub fn is_hensel_lift_code(c: &CyclicCode) -> bool {
    is_free_cyclic(c)
}

fn extract_genset(linear: &ChainCode, ring: PrimePower, n: usize) -> Result<CyclicGenSet> {
    let p = ring.p;
    let gen = linear.generator();
    let vals = linear.valuations();
    let mut torsion: Vec<u64> = pa::x_n_minus_1(n, p);
    let mut prev_deg = n;
    let mut terms = Vec::new();
    for a in 0..ring.e {
        for (r, &v) in vals.iter().enumerate() {
            if v != a {
                continue;
            }
            let pv = ring.pow(v);
            let row: Vec<u64> = gen.row(r).iter().map(|&x| x / pv % p).collect();
            torsion = pa::gcd_fp(&torsion, &row, p);
        }
        let deg = pa::degree(&torsion).expect("gcd with x^n - 1 is nonzero");
        if deg < prev_deg {
            let lifted = hensel_lift_dense(&torsion, n, ring)
                .map_err(|e| Error::ChainViolation(format!("torsion generator: {e}")))?;
            terms.push(GenTerm { a, g: dense_to_ring(&lifted, n, ring.modulus()) });
            prev_deg = deg;
        }
    }
    Ok(CyclicGenSet { ring, n, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64], n: usize, q: u64) -> RingPoly {
        RingPoly::new(c, n, q).unwrap()
    }

    #[test]
    fn circulant_of_inner_generator() {
        let g = circulant_expand(&poly(&[20, 28], 5, 36));
        assert_eq!(g.row(0), &[20, 28, 0, 0, 0]);
        assert_eq!(g.row(4), &[28, 0, 0, 0, 20]);
        assert_eq!(circulant_expand(&RingPoly::one(4, 9)), ResidueMatrix::identity(4, 9));
        assert!(circulant_expand(&RingPoly::zero(4, 9)).is_zero());
    }

    #[test]
    fn free_divisor_generates_single_term() {
        let z9 = PrimePower::new(3, 2);
        let c = CyclicCode::from_generators(&[poly(&[-1, 1], 2, 9)], z9).unwrap();
        let terms = c.genset().terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].a, 0);
        assert_eq!(terms[0].g, poly(&[-1, 1], 2, 9));
        assert!(is_free_cyclic(&c));
        assert!(c.non_free_part().unwrap().linear().is_zero());
    }

    #[test]
    fn multiple_of_p() {
        let z9 = PrimePower::new(3, 2);
        let c = CyclicCode::from_generators(&[poly(&[3], 2, 9)], z9).unwrap();
        let terms = c.genset().terms();
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].a, terms[0].g.clone()), (1, RingPoly::one(2, 9)));
        assert!(!is_free_cyclic(&c));
        assert!(c.non_free_part().unwrap().linear().row_span_equal(c.linear()));
    }

    #[test]
    fn inner_code_over_z9_is_not_free() {
        let z9 = PrimePower::new(3, 2);
        let c = CyclicCode::from_generators(&[poly(&[2, 1], 5, 9)], z9).unwrap();
        assert_eq!(c.linear().subtype().counts(), &[4, 1]);
        let terms = c.genset().terms();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].a, 0);
        assert_eq!(terms[0].g, poly(&[-1, 1], 5, 9));
        assert_eq!(terms[1].a, 1);
        assert_eq!(terms[1].g, RingPoly::one(5, 9));
        assert!(!is_free_cyclic(&c));
        let single = CyclicCode::from_generators(&[c.generator_polynomial()], z9).unwrap();
        assert!(single.linear().row_span_equal(c.linear()));
    }

    #[test]
    fn generator_polynomial_formula() {
        let z4 = PrimePower::new(2, 2);
        let set = CyclicGenSet {
            ring: z4,
            n: 3,
            terms: vec![
                GenTerm { a: 0, g: poly(&[1, 1, 1], 3, 4) },
                GenTerm { a: 1, g: poly(&[-1, 1], 3, 4) },
            ],
        };
        assert_eq!(generator_polynomial(&set), poly(&[-1, 3, 1], 3, 4));
    }

    #[test]
    fn trivial_lifts() {
        for ring in [PrimePower::new(2, 3), PrimePower::new(3, 3), PrimePower::new(5, 2)] {
            let g = hensel_lift_dense(&[ring.p - 1, 1], 7, ring).unwrap();
            assert_eq!(g, vec![ring.modulus() - 1, 1]);
        }
        let g = hensel_lift_dense(&[1, 1, 1], 3, PrimePower::new(2, 2)).unwrap();
        assert_eq!(g, vec![1, 1, 1]);
    }

    #[test]
    fn non_divisor_is_rejected() {
        // x + 1 does not divide x^5 - 1 over F_3
        assert_eq!(
            hensel_lift_dense(&[1, 1], 5, PrimePower::new(3, 2)),
            Err(Error::NotADivisor)
        );
    }

    #[test]
    fn lift_of_cubic_factor_over_z8() {
        // x^7 - 1 = (x - 1)(x^3 + x + 1)(x^3 + x^2 + 1) over F_2
        let ring = PrimePower::new(2, 3);
        let g = hensel_lift_dense(&[1, 1, 0, 1], 7, ring).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[3], 1);
        let (_, r) = pa::divrem(&pa::x_n_minus_1(7, 8), &g, 8);
        assert!(r.is_empty());
        assert!(g.iter().zip([1, 1, 0, 1]).all(|(&x, y)| x % 2 == y));
    }

    #[test]
    fn zero_ideal() {
        let z4 = PrimePower::new(2, 2);
        let c = CyclicCode::from_generators(&[RingPoly::zero(3, 4)], z4).unwrap();
        assert!(c.genset().terms().is_empty());
        assert!(is_free_cyclic(&c));
        assert!(generator_polynomial(c.genset()).is_zero());
    }

    #[test]
    fn ideal_code_over_z36() {
        let m = Modulus::new(36).unwrap();
        let c = ideal_code(&poly(&[20, 28], 5, 36), &m).unwrap();
        assert!(c.project(0).unwrap().is_zero());
        assert_eq!(c.project(1).unwrap().subtype().counts(), &[4, 1]);
    }
}
