use serde::{Deserialize, Serialize};

use crate::error::{Candidates, Error, Result};
use crate::pir::params::SchemeParams;
use crate::pir::query::{QuerySecrets, Response};
use crate::pir::suite::CodeSuite;
use crate::ring::{PolyMatrix, ResidueMatrix};

/// One of the `r` final systems `b^{γ+i} = x · z_i`, where `x` is column
/// `i` of the wanted file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalSystem {
    /// File column, 0-based.
    pub column: usize,
    /// `b^{γ+i}`, `L x n`.
    pub lhs: ResidueMatrix,
    /// `z_i = [U^d_{1+i,γ+i}]_m H_IN^T`.
    pub z: Vec<u64>,
}

impl FinalSystem {
    /// For each file row, every `x` in `0..m'` with `x z = lhs_row`.
    pub fn candidates(&self, m_prime: u64) -> Vec<Vec<u64>> {
        let m = self.lhs.modulus();
        (0..self.lhs.rows())
            .map(|row| {
                let target = self.lhs.row(row);
                (0..m_prime)
                    .filter(|&x| self.z.iter().zip(target).all(|(&zk, &bk)| x * zk % m == bk))
                    .collect()
            })
            .collect()
    }
}

/// `B = [S_2^R - S_1^R G_OUT]_m H_Γ^T`, `L x sn`.
pub fn recovery_matrix(resp: &Response, suite: &CodeSuite, params: &SchemeParams) -> Result<ResidueMatrix> {
    let width = params.s * params.n;
    if resp.s_mat.cols() != 2 * width {
        return Err(Error::ShapeMismatch(format!(
            "response has width {}, expected {}",
            resp.s_mat.cols(),
            2 * width
        )));
    }
    let s1 = PolyMatrix::from_flat(resp.s_mat.col_range(0, width), params.n)?;
    let s2 = PolyMatrix::from_flat(resp.s_mat.col_range(width, 2 * width), params.n)?;
    let diff = s2.sub(&s1.mul(&suite.g_out)?)?;
    diff.flat().mul(&suite.h_gamma.transpose())
}

/// Slices `B` into the `r` systems picked out by `gamma`.
pub fn final_systems(
    resp: &Response,
    suite: &CodeSuite,
    secrets: &QuerySecrets,
    params: &SchemeParams,
) -> Result<Vec<FinalSystem>> {
    let b = recovery_matrix(resp, suite, params)?;
    let n = params.n;
    (0..params.r)
        .map(|i| {
            let block = secrets.gamma - 1 + i;
            Ok(FinalSystem {
                column: i,
                lhs: b.col_range(block * n, (block + 1) * n),
                z: suite.h_in.apply_transpose(secrets.u_diag[i].coeffs()),
            })
        })
        .collect()
}

/// Solves every final system and returns the wanted file over `Z_{m'}`.
///
/// Fails with [`Error::AmbiguousSolution`] listing every coordinate that
/// admits more than one value, or [`Error::NoSolution`] when some
/// coordinate admits none.
pub fn recover(
    resp: &Response,
    suite: &CodeSuite,
    secrets: &QuerySecrets,
    params: &SchemeParams,
) -> Result<ResidueMatrix> {
    let mp = params.m_prime();
    let mut file = ResidueMatrix::zeros(params.l, params.r, mp);
    let mut ambiguous = Vec::new();
    for sys in final_systems(resp, suite, secrets, params)? {
        for (row, values) in sys.candidates(mp).into_iter().enumerate() {
            match values.as_slice() {
                [] => return Err(Error::NoSolution { row, col: sys.column }),
                [x] => file.set(row, sys.column, *x),
                _ => ambiguous.push(Candidates { row, col: sys.column, values }),
            }
        }
    }
    if ambiguous.is_empty() {
        Ok(file)
    } else {
        ambiguous.sort_by_key(|c| (c.row, c.col));
        Err(Error::AmbiguousSolution(ambiguous))
    }
}
