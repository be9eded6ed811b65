use serde::{Deserialize, Serialize};

use crate::chain::ChainCode;
use crate::cyclic::{circulant_expand, ideal_code, is_hensel_lift_code, CyclicCode};
use crate::error::{Error, Result};
use crate::ring::{Crt, Modulus, PolyMatrix, ResidueMatrix, RingPoly};
use crate::zm::ZmCode;

/// The user's key material: the inner code `C_IN = <g_in>`, the nested
/// cyclic codes `C~_j = <g~_j>`, the mixing matrix `M`, and everything
/// derived from them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeSuite {
    pub modulus: Modulus,
    pub n: usize,
    pub s: usize,
    pub g_in: RingPoly,
    pub c_in: ZmCode,
    pub tilde_gens: Vec<RingPoly>,
    pub tilde: Vec<ZmCode>,
    pub m_mat: ResidueMatrix,
    /// `diag(g~_1, ..., g~_s) M`.
    pub g_out: PolyMatrix,
    /// `n x n` parity check of `C_IN`.
    pub h_in: ResidueMatrix,
    /// Block diagonal with `s` copies of `h_in`.
    pub h_gamma: ResidueMatrix,
    /// `s` copies of `C_IN` side by side, length `sn`.
    pub gamma_in: ZmCode,
    /// `C~_s ∩ C_IN^perp`, the pool the retrieval entries are drawn from.
    pub u_pool: ZmCode,
}

/// `diag(g~_1, ..., g~_s) M`: row `i` is `g~_i` times row `i` of `M`.
pub fn build_gout(tilde_gens: &[RingPoly], m_mat: &ResidueMatrix) -> Result<PolyMatrix> {
    let s = tilde_gens.len();
    if m_mat.shape() != (s, s) {
        return Err(Error::ShapeMismatch(format!(
            "M is {}x{} for {s} outer codes",
            m_mat.rows(),
            m_mat.cols()
        )));
    }
    let entries: Vec<Vec<RingPoly>> = tilde_gens
        .iter()
        .enumerate()
        .map(|(i, g)| (0..s).map(|j| g.scale(m_mat.get(i, j))).collect())
        .collect();
    PolyMatrix::from_entries(&entries)
}

/// Block-diagonal matrix with `copies` copies of `h`.
pub fn block_diagonal(h: &ResidueMatrix, copies: usize) -> ResidueMatrix {
    let (a, n) = h.shape();
    let mut out = ResidueMatrix::zeros(a * copies, n * copies, h.modulus());
    for b in 0..copies {
        for r in 0..a {
            for c in 0..n {
                out.set(b * a + r, b * n + c, h.get(r, c));
            }
        }
    }
    out
}

impl CodeSuite {
    pub fn new(g_in: RingPoly, tilde_gens: Vec<RingPoly>, m_mat: ResidueMatrix) -> Result<Self> {
        let modulus = Modulus::new(g_in.modulus())?;
        let n = g_in.n();
        let s = tilde_gens.len();
        if s == 0 {
            return Err(Error::InvalidParams("at least one outer code is needed".into()));
        }
        if tilde_gens.iter().any(|g| g.n() != n || g.modulus() != modulus.m()) {
            return Err(Error::ShapeMismatch("outer generators live in a different ring".into()));
        }
        if m_mat.modulus() != modulus.m() {
            return Err(Error::ShapeMismatch("M is not over Z_m".into()));
        }
        let c_in = ideal_code(&g_in, &modulus)?;
        let tilde = tilde_gens
            .iter()
            .map(|g| ideal_code(g, &modulus))
            .collect::<Result<Vec<_>>>()?;
        let g_out = build_gout(&tilde_gens, &m_mat)?;
        let h_in = c_in.parity_check();
        let h_gamma = block_diagonal(&h_in, s);
        let gamma_in = ZmCode::from_generator(&block_diagonal(&circulant_expand(&g_in), s), &modulus)?;
        let u_pool = tilde[s - 1].intersect(&c_in.dual())?;
        Ok(CodeSuite {
            modulus,
            n,
            s,
            g_in,
            c_in,
            tilde_gens,
            tilde,
            m_mat,
            g_out,
            h_in,
            h_gamma,
            gamma_in,
            u_pool,
        })
    }

    pub fn validate(&self) -> ValidationReport {
        validate_suite(self)
    }
}

/// Outcome of checking a suite against the scheme's three conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `C~_s ⊆ ... ⊆ C~_1`.
    pub nested: bool,
    /// `C~_s ∩ C_IN ≠ {0}`.
    pub meets_inner: bool,
    /// `C~_s ∩ (C_IN^perp \ C_IN)` is nonempty.
    pub meets_dual_outside_inner: bool,
    /// `hensel[j][i]`: whether the projection of `C~_j` onto prime `i` is a
    /// Hensel lift.
    pub hensel: Vec<Vec<bool>>,
    pub no_hensel_lifts: bool,
    pub m_invertible: bool,
    /// `det M mod m` when it fits the exact integer computation.
    pub det_m: Option<u64>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn condition1(&self) -> bool {
        self.nested
    }

    pub fn condition2(&self) -> bool {
        self.meets_inner && self.meets_dual_outside_inner
    }

    pub fn condition3(&self) -> bool {
        self.no_hensel_lifts
    }

    /// Conditions 1 and 2 are needed for the protocol to run; condition 3
    /// only matters for privacy.
    pub fn usable(&self) -> bool {
        self.condition1() && self.condition2()
    }
}

pub fn validate_suite(suite: &CodeSuite) -> ValidationReport {
    let nested = suite.tilde.windows(2).all(|w| w[1].is_subcode_of(&w[0]));
    let last = &suite.tilde[suite.s - 1];
    let meets_inner = last
        .intersect(&suite.c_in)
        .map(|c| c.components().iter().any(|k| !k.is_zero()))
        .unwrap_or(false);
    let meets_dual_outside_inner = !suite.u_pool.is_subcode_of(&suite.c_in);

    let hensel: Vec<Vec<bool>> = suite
        .tilde_gens
        .iter()
        .map(|g| {
            suite
                .modulus
                .factors()
                .iter()
                .map(|&f| {
                    CyclicCode::from_generators(&[g.reduce(f.modulus())], f)
                        .map(|c| is_hensel_lift_code(&c))
                        .unwrap_or(false)
                })
                .collect()
        })
        .collect();
    let no_hensel_lifts = hensel.iter().flatten().all(|&h| !h);

    let m_invertible = is_invertible(&suite.m_mat, &suite.modulus);
    let det_m = determinant_mod(&suite.m_mat);
    let mut warnings = Vec::new();
    if !m_invertible {
        let det = det_m.map_or("a zero divisor".to_string(), |d| d.to_string());
        warnings.push(format!("M is not invertible over Z_{}: det M = {det}", suite.modulus.m()));
    }
    if !no_hensel_lifts {
        warnings.push("some outer code projection is a Hensel lift".into());
    }
    ValidationReport {
        nested,
        meets_inner,
        meets_dual_outside_inner,
        hensel,
        no_hensel_lifts,
        m_invertible,
        det_m,
        warnings,
    }
}

/// `det M mod q` by fraction-free elimination over the integers; `None` on
/// overflow.
pub fn determinant_mod(m: &ResidueMatrix) -> Option<u64> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    if n == 0 {
        return Some(1 % m.modulus());
    }
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|r| m.row(r).iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    let q = m.modulus() as i128;
    Some((sign * a[n - 1][n - 1]).rem_euclid(q) as u64)
}

/// A square matrix over `Z_m` is invertible iff every CRT image has full
/// free rank.
pub fn is_invertible(m: &ResidueMatrix, modulus: &Modulus) -> bool {
    m.rows() == m.cols()
        && modulus.factors().iter().zip(m.crt_split(modulus)).all(|(&f, mi)| {
            ChainCode::from_generator(&mi, f)
                .map(|c| c.is_free() && c.rank() == m.rows())
                .unwrap_or(false)
        })
}
