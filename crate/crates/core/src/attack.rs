//! The server-side rank-difference attack.
//!
//! For each prime power and each candidate index `j`, the rows of block `j`
//! are deleted from both halves of `Q = [A | Δ]`. A parity check `H[j]` of
//! the code generated by `A[j]^T` kills the `W` part of `Δ[j]`, leaving
//! `Z[j] = H[j] Δ[j] = H[j] (E[j] + U[j])`. Only `j = d` removes the
//! retrieval entries, so `Z[d]` tends to have the smallest
//! `Z_p`-dimension.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::ChainCode;
use crate::error::{Error, Result};
use crate::pir::SchemeParams;
use crate::ring::{PrimePower, ResidueMatrix};
use crate::zm::NfConvention;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unique(usize),
    Ambiguous(Vec<usize>),
    Empty,
}

impl Verdict {
    fn from_set(set: &[usize]) -> Self {
        match set {
            [] => Verdict::Empty,
            [d] => Verdict::Unique(*d),
            _ => Verdict::Ambiguous(set.to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeResult {
    pub p: u64,
    pub e: u32,
    /// `dim_p(Z[j])` for `j = 1..=t`.
    pub dims: Vec<usize>,
    /// 1-based indices attaining the minimum.
    pub argmin: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackResult {
    pub per_prime: Vec<PrimeResult>,
    pub intersection: Vec<usize>,
    pub verdict: Verdict,
}

/// Splits `Q` into `A` and `Δ`, each `rt x ns`.
pub fn split_query(q: &ResidueMatrix, params: &SchemeParams) -> Result<(ResidueMatrix, ResidueMatrix)> {
    let w = params.n * params.s;
    if q.shape() != (params.r * params.t, 2 * w) {
        return Err(Error::ShapeMismatch(format!(
            "query is {}x{}, expected {}x{}",
            q.rows(),
            q.cols(),
            params.r * params.t,
            2 * w
        )));
    }
    Ok((q.col_range(0, w), q.col_range(w, 2 * w)))
}

/// Removes rows `(j-1)r .. jr` (block `j`, 1-based).
pub fn delete_block(x: &ResidueMatrix, j: usize, r: usize) -> Result<ResidueMatrix> {
    let blocks = x.rows() / r.max(1);
    if j == 0 || j > blocks || !x.rows().is_multiple_of(r) {
        return Err(Error::IndexOutOfRange { index: j, len: blocks });
    }
    let keep: Vec<usize> = (0..x.rows()).filter(|&i| i / r != j - 1).collect();
    Ok(x.select_rows(&keep))
}

/// `H[j]`: a parity check of the code generated by `a_j^T`, so that
/// `H[j] a_j = 0`. Under the standard convention only the free rows are
/// kept.
pub fn block_parity_check(a_j: &ResidueMatrix, ring: PrimePower, conv: NfConvention) -> ResidueMatrix {
    let code = ChainCode::from_generator(&a_j.transpose(), ring).expect("matrix over the component ring");
    let h = code.parity_check();
    match conv {
        NfConvention::Alternative => h,
        NfConvention::Standard => h.row_range(0, code.n() - code.rank()),
    }
}

/// `dim_p` of the row span of `H[j] Δ[j]` at one prime power.
pub fn block_dimension(
    a: &ResidueMatrix,
    delta: &ResidueMatrix,
    j: usize,
    r: usize,
    ring: PrimePower,
    conv: NfConvention,
) -> Result<usize> {
    let aj = delete_block(a, j, r)?;
    let dj = delete_block(delta, j, r)?;
    let h = block_parity_check(&aj, ring, conv);
    let z = h.mul(&dj)?;
    Ok(ChainCode::from_generator(&z, ring)?.zp_dimension())
}

fn argmin(dims: &[usize]) -> Vec<usize> {
    let min = dims.iter().copied().min().unwrap_or(0);
    (0..dims.len()).filter(|&j| dims[j] == min).map(|j| j + 1).collect()
}

/// The attack at prime index `i` (0-based, factor order).
pub fn attack_prime(q: &ResidueMatrix, params: &SchemeParams, i: usize, conv: NfConvention) -> Result<PrimeResult> {
    let ring = *params.modulus.factors().get(i).ok_or(Error::IndexOutOfRange {
        index: i,
        len: params.modulus.ell(),
    })?;
    let (a, delta) = split_query(&q.reduce(ring.modulus()), params)?;
    let dims = (1..=params.t)
        .into_par_iter()
        .map(|j| block_dimension(&a, &delta, j, params.r, ring, conv))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrimeResult {
        p: ring.p,
        e: ring.e,
        argmin: argmin(&dims),
        dims,
    })
}

/// Runs every prime and intersects the argmin sets.
pub fn attack(q: &ResidueMatrix, params: &SchemeParams, conv: NfConvention) -> Result<AttackResult> {
    let factors = params.modulus.factors().to_vec();
    let (a, delta) = split_query(q, params)?;
    let jobs: Vec<(usize, usize)> = (0..factors.len())
        .flat_map(|i| (1..=params.t).map(move |j| (i, j)))
        .collect();
    let projected: Vec<(ResidueMatrix, ResidueMatrix)> = factors
        .iter()
        .map(|f| (a.reduce(f.modulus()), delta.reduce(f.modulus())))
        .collect();
    let dims = jobs
        .par_iter()
        .map(|&(i, j)| block_dimension(&projected[i].0, &projected[i].1, j, params.r, factors[i], conv))
        .collect::<Result<Vec<_>>>()?;

    let per_prime: Vec<PrimeResult> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let d = dims[i * params.t..(i + 1) * params.t].to_vec();
            PrimeResult {
                p: f.p,
                e: f.e,
                argmin: argmin(&d),
                dims: d,
            }
        })
        .collect();
    let intersection: Vec<usize> = (1..=params.t)
        .filter(|j| per_prime.iter().all(|pr| pr.argmin.contains(j)))
        .collect();
    Ok(AttackResult {
        verdict: Verdict::from_set(&intersection),
        per_prime,
        intersection,
    })
}

/// Smallest numbers of files for which the attack's guarantees apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// `t > 2ns/r + 1`: every `Z[j]` with `j ≠ d` is nonzero.
    pub t_zj: usize,
    /// `t >= (K + ns)/r + 2` for the rank `K` of `nf(Γ_IN)`, when known.
    pub t_dim: Option<usize>,
    /// `t >= 2ns/r + 2`, using `K <= ns`.
    pub t_general: usize,
}

pub fn bounds(n: usize, s: usize, r: usize, k_opt: Option<usize>) -> Bounds {
    let ns = n * s;
    Bounds {
        t_zj: (2 * ns + r) / r + 1,
        t_dim: k_opt.map(|k| (k + ns).div_ceil(r) + 2),
        t_general: (2 * ns).div_ceil(r) + 2,
    }
}

/// Fraction of `trials` generator matrices from `sample` whose code is
/// free of positive rank.
pub fn free_density_with<R: Rng + ?Sized>(
    ring: PrimePower,
    trials: usize,
    rng: &mut R,
    mut sample: impl FnMut(&mut R) -> ResidueMatrix,
) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let free = (0..trials)
        .filter(|_| {
            let c = ChainCode::from_generator(&sample(rng), ring).expect("sampled over the ring");
            c.rank() > 0 && c.is_free()
        })
        .count();
    free as f64 / trials as f64
}

/// Fraction of uniformly random `rank x length` generators over `Z_{p^e}`
/// that generate a free code.
pub fn empirical_free_density<R: Rng + ?Sized>(
    p: u64,
    e: u32,
    length: usize,
    rank: usize,
    trials: usize,
    rng: &mut R,
) -> f64 {
    let ring = PrimePower::new(p, e);
    let q = ring.modulus();
    free_density_with(ring, trials, rng, |rng| {
        let data = (0..rank * length).map(|_| rng.gen_range(0..q)).collect();
        ResidueMatrix::from_vec(rank, length, q, data).expect("sized data")
    })
}
