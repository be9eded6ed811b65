//! Linear codes over the chain ring `Z_{p^e}`.
//!
//! Every code is kept in standard form: after a column permutation the
//! generator is block upper triangular,
//!
//! ```text
//! Id_{k0}  A01      A02      ...  A0e
//! 0        p Id_k1  p A12    ...  p A1e
//! ...
//! 0        0        ...  p^{e-1} Id  p^{e-1} A(e-1)e
//! ```
//!
//! with all-zero rows dropped. The tuple `(k_0, ..., k_{e-1})` is the
//! subtype. Parity checks are assembled block by block from the `A` blocks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::modulus::{inv_mod, PrimePower};
use crate::ring::ResidueMatrix;

/// Row counts `(k_0, ..., k_{e-1})` of a standard-form generator, one per
/// valuation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subtype(pub Vec<usize>);

impl Subtype {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// `K = sum k_i`.
    pub fn rank(&self) -> usize {
        self.0.iter().sum()
    }

    /// `k = sum k_i (e - i)`, so that `|C| = p^k`.
    pub fn zp_dimension(&self) -> usize {
        let e = self.0.len();
        self.0.iter().enumerate().map(|(i, &k)| k * (e - i)).sum()
    }

    /// Free codes have every generator row at valuation zero.
    pub fn is_free(&self) -> bool {
        self.0.iter().skip(1).all(|&k| k == 0)
    }

    /// The subtype the dual code must have: `(n - K, k_{e-1}, ..., k_1)`.
    pub fn dual(&self, n: usize) -> Subtype {
        let mut out = vec![n - self.rank()];
        out.extend(self.0.iter().skip(1).rev());
        Subtype(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCode {
    ring: PrimePower,
    n: usize,
    /// Standard-form generator with columns in pivot order.
    gen_perm: ResidueMatrix,
    /// `col_perm[c]` is the original column placed at position `c`.
    col_perm: Vec<usize>,
    /// Valuation of each row of `gen_perm`; non-decreasing.
    valuations: Vec<u32>,
    subtype: Subtype,
}

impl ChainCode {
    /// Brings a generator matrix into standard form.
    ///
    /// Elimination tracks p-adic valuations: at each step the entry of
    /// minimal valuation in the residual block is chosen (leftmost column,
    /// then topmost row), moved to the diagonal, its unit part normalised,
    /// and the column cleared below. Rows above with the same valuation are
    /// cleared too so each valuation block carries an identity.
    pub fn from_generator(g: &ResidueMatrix, ring: PrimePower) -> Result<Self> {
        let q = ring.modulus();
        if !g.modulus().is_multiple_of(q) {
            return Err(Error::ShapeMismatch(format!(
                "generator over Z_{} cannot be read over Z_{q}",
                g.modulus()
            )));
        }
        let mut work = g.reduce(q);
        let (rows, n) = work.shape();
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut valuations = Vec::new();

        for pos in 0..n.min(rows) {
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for c in pos..n {
                for r in pos..rows {
                    let v = ring.valuation(work.get(r, c));
                    if v < ring.e && best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, r, c));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
            let Some((v, pr, pc)) = best else { break };
            swap_rows(&mut work, pos, pr);
            swap_cols(&mut work, pos, pc);
            col_perm.swap(pos, pc);

            let pv = ring.pow(v);
            let unit = work.get(pos, pos) / pv;
            let inv = inv_mod(unit, q).expect("unit part is invertible");
            for x in work.row_mut(pos) {
                *x = *x * inv % q;
            }
            let pivot_row = work.row(pos).to_vec();
            for r in 0..rows {
                if r == pos || (r < pos && valuations[r] != v) {
                    continue;
                }
                let x = work.get(r, pos);
                if x == 0 {
                    continue;
                }
                let coef = x / pv;
                for (dst, &src) in work.row_mut(r).iter_mut().zip(&pivot_row) {
                    *dst = (*dst + q - coef * src % q) % q;
                }
            }
            valuations.push(v);
        }

        let k = valuations.len();
        let gen_perm = work.row_range(0, k);
        let mut counts = vec![0usize; ring.e as usize];
        for &v in &valuations {
            counts[v as usize] += 1;
        }
        Ok(ChainCode {
            ring,
            n,
            gen_perm,
            col_perm,
            valuations,
            subtype: Subtype(counts),
        })
    }

    pub fn zero(ring: PrimePower, n: usize) -> Self {
        Self::from_generator(&ResidueMatrix::zeros(0, n, ring.modulus()), ring)
            .expect("zero generator is valid")
    }

    pub fn full(ring: PrimePower, n: usize) -> Self {
        Self::from_generator(&ResidueMatrix::identity(n, ring.modulus()), ring)
            .expect("identity generator is valid")
    }

    pub fn ring(&self) -> PrimePower {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subtype(&self) -> &Subtype {
        &self.subtype
    }

    /// `rk(C) = sum k_i`.
    pub fn rank(&self) -> usize {
        self.subtype.rank()
    }

    pub fn zp_dimension(&self) -> usize {
        self.subtype.zp_dimension()
    }

    /// `|C| = p^k`, or `None` when it does not fit in a `u64`.
    pub fn cardinality(&self) -> Option<u64> {
        let k = u32::try_from(self.zp_dimension()).ok()?;
        self.ring.p.checked_pow(k)
    }

    pub fn is_free(&self) -> bool {
        self.subtype.is_free()
    }

    pub fn is_zero(&self) -> bool {
        self.valuations.is_empty()
    }

    pub fn valuations(&self) -> &[u32] {
        &self.valuations
    }

    pub fn column_permutation(&self) -> &[usize] {
        &self.col_perm
    }

    /// The standard-form generator with the column permutation applied, i.e.
    /// in the block triangular layout.
    pub fn generator_permuted(&self) -> &ResidueMatrix {
        &self.gen_perm
    }

    /// The standard-form generator in the original column order.
    pub fn generator(&self) -> ResidueMatrix {
        self.unpermute(&self.gen_perm)
    }

    fn unpermute(&self, m: &ResidueMatrix) -> ResidueMatrix {
        let mut out = ResidueMatrix::zeros(m.rows(), self.n, m.modulus());
        for r in 0..m.rows() {
            for (pos, &orig) in self.col_perm.iter().enumerate() {
                out.set(r, orig, m.get(r, pos));
            }
        }
        out
    }

    /// Row offsets of each valuation block, followed by `K`, then `n`.
    /// Column block `b` of the permuted layout spans `off[b]..off[b+1]`;
    /// block `e` holds the `n - K` non-pivot columns.
    fn block_offsets(&self) -> Vec<usize> {
        let mut off = vec![0usize];
        for &k in &self.subtype.0 {
            off.push(off.last().unwrap() + k);
        }
        off.push(self.n);
        off
    }

    /// `A_{a,b}` for `a < b <= e`: the block of row block `a` in column
    /// block `b`, divided by `p^a`.
    fn a_block(&self, off: &[usize], a: usize, b: usize) -> ResidueMatrix {
        let pa = self.ring.pow(a as u32);
        let q = self.ring.modulus();
        let (r0, r1) = (off[a], off[a + 1]);
        let (c0, c1) = (off[b], off[b + 1]);
        let mut out = ResidueMatrix::zeros(r1 - r0, c1 - c0, q);
        for r in r0..r1 {
            for c in c0..c1 {
                let x = self.gen_perm.get(r, c);
                debug_assert_eq!(x % pa, 0);
                out.set(r - r0, c - c0, x / pa);
            }
        }
        out
    }

    /// A parity-check matrix `H` with `C = { x : H x^T = 0 }`.
    ///
    /// `H` has `n - k_0` rows: `n - K` rows at valuation 0 followed by
    /// `k_{e-i}` rows at valuation `i` for `i = 1..e-1`. Its blocks are
    ///
    /// `B_{i,j} = -sum_{k=i+1}^{j-1} B_{i,k} A_{e-j,e-k}^T - A_{e-j,e-i}^T`.
    pub fn parity_check(&self) -> ResidueMatrix {
        let e = self.ring.e as usize;
        let q = self.ring.modulus();
        let off = self.block_offsets();
        let width = |c: usize| off[c + 1] - off[c];

        // b[i][j] for 0 <= i < j <= e, sized k_{e-i} x k_{e-j}
        let mut b: Vec<Vec<Option<ResidueMatrix>>> = vec![vec![None; e + 1]; e];
        for i in 0..e {
            for j in (i + 1)..=e {
                let mut acc = self
                    .a_block(&off, e - j, e - i)
                    .transpose()
                    .scale(q - 1);
                for k in (i + 1)..j {
                    let bik = b[i][k].as_ref().expect("computed earlier");
                    let at = self.a_block(&off, e - j, e - k).transpose();
                    let prod = bik.mul(&at).expect("block shapes agree");
                    acc = acc.sub(&prod).expect("block shapes agree");
                }
                b[i][j] = Some(acc);
            }
        }

        let rows = self.n - self.subtype.0[0];
        let mut h = ResidueMatrix::zeros(rows, self.n, q);
        let mut row = 0;
        for i in 0..e {
            let pi = self.ring.pow(i as u32);
            let own = e - i;
            for rho in 0..width(own) {
                h.set(row, off[own] + rho, pi);
                for c in 0..own {
                    let bij = b[i][e - c].as_ref().expect("computed above");
                    for col in 0..width(c) {
                        h.set(row, off[c] + col, pi * bij.get(rho, col) % q);
                    }
                }
                row += 1;
            }
        }
        self.unpermute(&h)
    }

    /// `C^perp`, generated by the parity-check matrix.
    pub fn dual(&self) -> ChainCode {
        ChainCode::from_generator(&self.parity_check(), self.ring).expect("same ring")
    }

    /// The subcode spanned by the generator rows of positive valuation.
    pub fn non_free_part(&self) -> ChainCode {
        let idx: Vec<usize> = (0..self.valuations.len())
            .filter(|&r| self.valuations[r] > 0)
            .collect();
        let rows = self.unpermute(&self.gen_perm.select_rows(&idx));
        ChainCode::from_generator(&rows, self.ring).expect("same ring")
    }

    /// Membership by back-substitution through the valuation-stratified
    /// rows: each pivot entry must be divisible by its row's `p^v`.
    pub fn contains(&self, w: &[u64]) -> bool {
        if w.len() != self.n {
            return false;
        }
        let q = self.ring.modulus();
        let mut res: Vec<u64> = self.col_perm.iter().map(|&c| w[c] % q).collect();
        for (r, &v) in self.valuations.iter().enumerate() {
            let x = res[r];
            if x == 0 {
                continue;
            }
            let pv = self.ring.pow(v);
            if !x.is_multiple_of(pv) {
                return false;
            }
            let coef = x / pv;
            for (dst, &g) in res.iter_mut().zip(self.gen_perm.row(r)) {
                *dst = (*dst + q - coef * g % q) % q;
            }
        }
        res.iter().all(|&x| x == 0)
    }

    /// Whether every row of `m` is a codeword.
    pub fn contains_rows(&self, m: &ResidueMatrix) -> bool {
        (0..m.rows()).all(|r| self.contains(m.row(r)))
    }

    pub fn is_subcode_of(&self, other: &ChainCode) -> bool {
        other.contains_rows(&self.generator())
    }

    pub fn row_span_equal(&self, other: &ChainCode) -> bool {
        self.n == other.n
            && self.ring == other.ring
            && self.subtype == other.subtype
            && self.is_subcode_of(other)
    }

    /// `C1 ∩ C2`, as the kernel of the stacked parity checks.
    pub fn intersect(&self, other: &ChainCode) -> Result<ChainCode> {
        if self.n != other.n || self.ring != other.ring {
            return Err(Error::ShapeMismatch("intersecting codes over different spaces".into()));
        }
        let stacked = self.parity_check().vstack(&other.parity_check())?;
        Ok(ChainCode::from_generator(&stacked, self.ring)?.dual())
    }

    /// A uniformly random codeword: each row's coefficient is uniform
    /// modulo `p^{e - v}`, which parametrises `C` bijectively.
    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let q = self.ring.modulus();
        let mut out = vec![0u64; self.n];
        for (r, &v) in self.valuations.iter().enumerate() {
            let coef = rng.gen_range(0..self.ring.pow(self.ring.e - v));
            if coef == 0 {
                continue;
            }
            for (pos, &g) in self.gen_perm.row(r).iter().enumerate() {
                let c = self.col_perm[pos];
                out[c] = (out[c] + coef * g) % q;
            }
        }
        out
    }
}

fn swap_rows(m: &mut ResidueMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols() {
        let (x, y) = (m.get(a, c), m.get(b, c));
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut ResidueMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows() {
        let (x, y) = (m.get(r, a), m.get(r, b));
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> PrimePower {
        PrimePower::new(2, 2)
    }

    fn code(rows: &[&[i64]], ring: PrimePower) -> ChainCode {
        let g = ResidueMatrix::from_rows(rows, ring.modulus()).unwrap();
        ChainCode::from_generator(&g, ring).unwrap()
    }

    #[test]
    fn dependent_rows_collapse_to_one_free_row() {
        let c = code(&[&[2, 2], &[1, 1]], z4());
        assert_eq!(c.subtype(), &Subtype(vec![1, 0]));
        assert_eq!(c.generator().row_vectors(), vec![vec![1, 1]]);
        assert_eq!(c.zp_dimension(), 2);
        assert_eq!(c.cardinality(), Some(4));
    }

    #[test]
    fn two_torsion_rows() {
        let c = code(&[&[2, 0], &[0, 2]], z4());
        assert_eq!(c.subtype(), &Subtype(vec![0, 2]));
        assert_eq!(c.generator().row_vectors(), vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn identity_is_full() {
        for ring in [PrimePower::new(2, 3), PrimePower::new(3, 2)] {
            let c = ChainCode::full(ring, 4);
            let mut expected = vec![0; ring.e as usize];
            expected[0] = 4;
            assert_eq!(c.subtype(), &Subtype(expected));
            assert_eq!(c.parity_check().rows(), 0);
        }
    }

    #[test]
    fn zero_code() {
        let c = ChainCode::zero(z4(), 5);
        assert_eq!(c.zp_dimension(), 0);
        assert_eq!(c.cardinality(), Some(1));
        assert_eq!(c.parity_check(), ResidueMatrix::identity(5, 4));
        assert!(c.contains(&[0; 5]));
        assert!(!c.contains(&[0, 0, 2, 0, 0]));
    }

    #[test]
    fn subtype_formulae() {
        let s = Subtype(vec![1, 1]);
        assert_eq!(s.zp_dimension(), 3);
        assert_eq!(Subtype(vec![0, 0, 0]).zp_dimension(), 0);
        assert_eq!(Subtype(vec![2, 1, 3]).dual(7), Subtype(vec![1, 3, 1]));
    }

    #[test]
    fn membership() {
        let c = ChainCode::full(z4(), 2);
        assert!(c.contains(&[1, 3]));
        let c = code(&[&[1, 1, 0], &[0, 2, 2]], z4());
        assert!(c.contains(&[0, 0, 0]));
        assert!(c.contains(&[3, 1, 2]));
        assert!(!c.contains(&[0, 1, 1]));
    }

    #[test]
    fn span_equality_ignores_generator_choice() {
        let a = code(&[&[2, 2], &[1, 1]], z4());
        let b = code(&[&[1, 1]], z4());
        assert!(a.row_span_equal(&b));
        assert!(!a.row_span_equal(&code(&[&[1, 0]], z4())));
    }

    #[test]
    fn non_free_part_of_mixed_code() {
        let c = code(&[&[1, 1, 0], &[0, 2, 2]], z4());
        assert_eq!(c.subtype(), &Subtype(vec![1, 1]));
        let nf = c.non_free_part();
        assert_eq!(nf.cardinality(), Some(2));
        assert!(nf.contains(&[0, 2, 2]));
        assert!(ChainCode::full(z4(), 3).non_free_part().is_zero());
    }

    #[test]
    fn parity_check_of_cyclic_code_over_z9() {
        // circulant of x + 2 over Z_9, n = 5
        let g = ResidueMatrix::from_rows(
            &[
                [2, 1, 0, 0, 0],
                [0, 2, 1, 0, 0],
                [0, 0, 2, 1, 0],
                [0, 0, 0, 2, 1],
                [1, 0, 0, 0, 2],
            ],
            9,
        )
        .unwrap();
        let c = ChainCode::from_generator(&g, PrimePower::new(3, 2)).unwrap();
        assert_eq!(c.subtype(), &Subtype(vec![4, 1]));
        let h = c.parity_check();
        assert_eq!(h.row_vectors(), vec![vec![3, 3, 3, 3, 3]]);
    }

    #[test]
    fn parity_check_three_levels() {
        let ring = PrimePower::new(2, 3);
        let c = code(&[&[1, 3, 5, 7], &[0, 2, 6, 4], &[0, 0, 4, 4]], ring);
        assert_eq!(c.subtype(), &Subtype(vec![1, 1, 1]));
        let h = c.parity_check();
        assert_eq!(h.rows(), 3);
        let prod = c.generator().mul(&h.transpose()).unwrap();
        assert!(prod.is_zero());
        assert_eq!(c.dual().subtype(), &c.subtype().dual(4));
        assert!(c.dual().dual().row_span_equal(&c));
    }

    #[test]
    fn intersection_with_trivial_codes() {
        let c = code(&[&[1, 1, 0], &[0, 2, 2]], z4());
        let full = ChainCode::full(z4(), 3);
        let zero = ChainCode::zero(z4(), 3);
        assert!(c.intersect(&full).unwrap().row_span_equal(&c));
        assert!(c.intersect(&zero).unwrap().is_zero());
    }
}
