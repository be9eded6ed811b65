use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pir::database::Database;
use crate::pir::params::SchemeParams;
use crate::pir::suite::CodeSuite;
use crate::ring::{Modulus, PolyMatrix, ResidueMatrix, RingPoly};
use crate::zm::NfConvention;

/// Attempts allowed for drawing one retrieval entry.
pub const RETRIEVAL_SAMPLE_CAP: usize = 10_000;

/// The public query `Q = [A | Δ]`, `rt x 2ns` over `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub q: ResidueMatrix,
}

/// Everything the user keeps private about one query. Indices `d` and
/// `gamma` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerySecrets {
    pub d: usize,
    pub gamma: usize,
    pub a_mats: Vec<PolyMatrix>,
    pub e_mats: Vec<PolyMatrix>,
    /// `U^d_{1+λ, γ+λ}` for `λ = 0..r-1`.
    pub u_diag: Vec<RingPoly>,
}

impl QuerySecrets {
    /// `U^i`: zero unless `i = d`, where it carries `u_diag` on the shifted
    /// diagonal starting at column `gamma`.
    pub fn u_matrix(&self, i: usize, params: &SchemeParams) -> PolyMatrix {
        let mut u = PolyMatrix::zeros(params.r, params.s, params.n, params.m());
        if i == self.d {
            for (lambda, entry) in self.u_diag.iter().enumerate() {
                u.set(lambda, self.gamma - 1 + lambda, entry).expect("entry shape checked");
            }
        }
        u
    }

    fn stacked(blocks: impl Iterator<Item = PolyMatrix>, params: &SchemeParams) -> ResidueMatrix {
        let mut out = ResidueMatrix::zeros(0, params.s * params.n, params.m());
        for b in blocks {
            out = out.vstack(b.flat()).expect("blocks share width");
        }
        out
    }

    /// `[A]_m`, `rt x sn`.
    pub fn stacked_a(&self, params: &SchemeParams) -> ResidueMatrix {
        Self::stacked(self.a_mats.iter().cloned(), params)
    }

    /// `[E]_m`, `rt x sn`.
    pub fn stacked_e(&self, params: &SchemeParams) -> ResidueMatrix {
        Self::stacked(self.e_mats.iter().cloned(), params)
    }

    /// `[U]_m`, `rt x sn`.
    pub fn stacked_u(&self, params: &SchemeParams) -> ResidueMatrix {
        Self::stacked((1..=params.t).map(|i| self.u_matrix(i, params)), params)
    }

    fn check_shapes(&self, params: &SchemeParams) -> Result<()> {
        params.check_index(self.d)?;
        if self.gamma == 0 || self.gamma > params.gamma_choices() {
            return Err(Error::InvalidParams(format!(
                "gamma = {} outside 1..={}",
                self.gamma,
                params.gamma_choices()
            )));
        }
        let block_ok = |m: &PolyMatrix| {
            m.rows() == params.r && m.cols() == params.s && m.n() == params.n && m.modulus() == params.m()
        };
        if self.a_mats.len() != params.t || self.e_mats.len() != params.t {
            return Err(Error::ShapeMismatch("need one A and one E block per file".into()));
        }
        if !self.a_mats.iter().chain(&self.e_mats).all(block_ok) {
            return Err(Error::ShapeMismatch("A and E blocks must be r x s over R".into()));
        }
        if self.u_diag.len() != params.r
            || self.u_diag.iter().any(|u| u.n() != params.n || u.modulus() != params.m())
        {
            return Err(Error::ShapeMismatch("need r retrieval entries over R".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QueryOptions {
    pub convention: NfConvention,
    /// Redraw retrieval entries until each passes [`lambda_check`].
    pub repair: bool,
}

/// The server's answer `S = DB Q`, `L x 2ns` over `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub s_mat: ResidueMatrix,
}

/// Builds `Q = [A | Δ]` with `Δ^i = A^i G_OUT + E^i + U^i` from fixed
/// secrets.
pub fn assemble_query(params: &SchemeParams, suite: &CodeSuite, secrets: &QuerySecrets) -> Result<Query> {
    secrets.check_shapes(params)?;
    let width = params.s * params.n;
    let mut a = ResidueMatrix::zeros(0, width, params.m());
    let mut delta = ResidueMatrix::zeros(0, width, params.m());
    for i in 1..=params.t {
        let ai = &secrets.a_mats[i - 1];
        let w = ai.mul(&suite.g_out)?;
        let di = w.add(&secrets.e_mats[i - 1])?.add(&secrets.u_matrix(i, params))?;
        a = a.vstack(ai.flat())?;
        delta = delta.vstack(di.flat())?;
    }
    Ok(Query { q: a.hstack(&delta)? })
}

/// A uniform element of `m'R`.
pub fn random_mprime_poly<R: Rng + ?Sized>(modulus: &Modulus, n: usize, rng: &mut R) -> RingPoly {
    let mp = modulus.m_prime();
    let hi = modulus.m() / mp;
    let coeffs = (0..n).map(|_| mp * rng.gen_range(0..hi)).collect();
    RingPoly::from_residues(coeffs, modulus.m())
}

fn random_block<R: Rng + ?Sized>(
    params: &SchemeParams,
    rng: &mut R,
    mut entry: impl FnMut(&mut R) -> Result<RingPoly>,
) -> Result<PolyMatrix> {
    let rows = (0..params.r)
        .map(|_| (0..params.s).map(|_| entry(rng)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::from_entries(&rows)
}

/// Draws one retrieval entry from the non-free part of `C~_s ∩ C_IN^perp`,
/// rejecting members of `C_IN` and, under repair, entries whose `λ < m'`.
pub fn sample_retrieval_entry<R: Rng + ?Sized>(
    suite: &CodeSuite,
    opts: QueryOptions,
    rng: &mut R,
) -> Result<RingPoly> {
    let m = suite.modulus.m();
    for _ in 0..RETRIEVAL_SAMPLE_CAP {
        let w = suite.u_pool.sample_nonfree(opts.convention, rng)?;
        if suite.c_in.contains(&w) {
            continue;
        }
        let u = RingPoly::from_residues(w, m);
        if opts.repair && !lambda_check(&u, &suite.h_in, &suite.modulus)?.pass {
            continue;
        }
        return Ok(u);
    }
    Err(Error::SamplerExhausted {
        what: if opts.repair {
            "retrieval entry meeting the repair condition".into()
        } else {
            "retrieval entry outside C_IN".into()
        },
        attempts: RETRIEVAL_SAMPLE_CAP,
    })
}

/// Draws all secrets for retrieving file `d` and builds the query.
pub fn query_gen<R: Rng + ?Sized>(
    params: &SchemeParams,
    suite: &CodeSuite,
    d: usize,
    opts: QueryOptions,
    rng: &mut R,
) -> Result<(Query, QuerySecrets)> {
    params.check_index(d)?;
    let gamma = rng.gen_range(1..=params.gamma_choices());
    let modulus = &suite.modulus;
    let a_mats = (0..params.t)
        .map(|_| random_block(params, rng, |rng| Ok(random_mprime_poly(modulus, params.n, rng))))
        .collect::<Result<Vec<_>>>()?;
    let e_mats = (0..params.t)
        .map(|_| {
            random_block(params, rng, |rng| {
                let w = suite.c_in.sample_nonfree(opts.convention, rng)?;
                Ok(RingPoly::from_residues(w, modulus.m()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let u_diag = (0..params.r)
        .map(|_| sample_retrieval_entry(suite, opts, rng))
        .collect::<Result<Vec<_>>>()?;
    let secrets = QuerySecrets { d, gamma, a_mats, e_mats, u_diag };
    let query = assemble_query(params, suite, &secrets)?;
    Ok((query, secrets))
}

/// Replaces every retrieval entry that fails [`lambda_check`] with a fresh
/// draw meeting the repair condition. Returns how many entries were
/// replaced.
pub fn enforce_repair<R: Rng + ?Sized>(
    secrets: &mut QuerySecrets,
    suite: &CodeSuite,
    convention: NfConvention,
    rng: &mut R,
) -> Result<usize> {
    let opts = QueryOptions { convention, repair: true };
    let mut replaced = 0;
    for u in secrets.u_diag.iter_mut() {
        let ok = matches!(lambda_check(u, &suite.h_in, &suite.modulus), Ok(c) if c.pass);
        if !ok {
            *u = sample_retrieval_entry(suite, opts, rng)?;
            replaced += 1;
        }
    }
    Ok(replaced)
}

/// `S = DB Q` over `Z_m`.
pub fn server_respond(db: &Database, query: &Query) -> Result<Response> {
    db.validate()?;
    if db.m != query.q.modulus() {
        return Err(Error::ShapeMismatch(format!(
            "database over Z_{} and query over Z_{}",
            db.m,
            query.q.modulus()
        )));
    }
    Ok(Response {
        s_mat: db.matrix().mul(&query.q)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCheck {
    /// `z = [u]_m H_IN^T`.
    pub z: Vec<u64>,
    /// Smallest nonzero `λ` with `λ z = 0 mod m`; `m` when there is none.
    pub lambda: u64,
    /// `λ >= m'`.
    pub pass: bool,
}

/// The smallest nonzero annihilator of `z` is `m / gcd(m, z_1, ..., z_n)`.
pub fn lambda_check(u: &RingPoly, h_in: &ResidueMatrix, modulus: &Modulus) -> Result<LambdaCheck> {
    let m = modulus.m();
    let z = h_in.apply_transpose(u.coeffs());
    if z.iter().all(|&x| x == 0) {
        return Err(Error::ZeroZ);
    }
    let g = z.iter().fold(m, |acc, &x| crate::ring::modulus::gcd(acc, x));
    let lambda = m / g;
    Ok(LambdaCheck {
        z,
        lambda,
        pass: lambda >= modulus.m_prime(),
    })
}
