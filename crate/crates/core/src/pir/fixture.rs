//! Embedded instances: the small worked example over `Z_36` with every
//! random choice fixed, and a family of suites for which the repair
//! condition can always be met.

use crate::error::{Error, Result};
use crate::pir::database::Database;
use crate::pir::params::SchemeParams;
use crate::pir::query::QuerySecrets;
use crate::pir::suite::CodeSuite;
use crate::ring::{Crt, Modulus, PolyMatrix, ResidueMatrix, RingPoly};

pub const PAPER_D: usize = 2;
pub const PAPER_GAMMA: usize = 2;

const N: usize = 5;
const M: u64 = 36;

fn p(c: &[i64]) -> RingPoly {
    RingPoly::new(c, N, M).expect("fixture polynomial")
}

fn block(entries: [[&[i64]; 3]; 2]) -> PolyMatrix {
    let rows: Vec<Vec<RingPoly>> = entries.iter().map(|r| r.iter().map(|c| p(c)).collect()).collect();
    PolyMatrix::from_entries(&rows).expect("fixture block")
}

/// `m = 36, n = 5, s = 3, r = 2, t = 3, L = 3`.
pub fn paper_params() -> SchemeParams {
    SchemeParams::new(M, N, 3, 2, 3, 3).expect("fixture parameters")
}

/// `C_IN = <28x + 20>`, `C~ = <9x + 1>, <x + 17>, <21x + 33>`.
pub fn paper_suite() -> CodeSuite {
    let m_mat = ResidueMatrix::from_rows(&[[1, 0, 2], [0, 1, 0], [1, 1, 0]], M).expect("fixture M");
    CodeSuite::new(p(&[20, 28]), vec![p(&[1, 9]), p(&[17, 1]), p(&[33, 21])], m_mat).expect("fixture suite")
}

pub fn paper_database() -> Database {
    let rows = vec![vec![4, 1, 0, 2, 5, 1], vec![1, 3, 4, 1, 3, 0], vec![0, 5, 0, 1, 2, 3]];
    Database::new(&paper_params(), rows).expect("fixture database")
}

pub fn paper_secrets() -> QuerySecrets {
    let a_mats = vec![
        block([[&[0, 0, 0, 6], &[6], &[0, 0, 12]], [&[18, 12], &[6, 0, 24], &[0, 0, 0, 0, 6]]]),
        block([[&[0, 6, 18], &[0, 24], &[0, 6, 6]], [&[30], &[6, 12], &[0, 12]]]),
        block([[&[], &[0, 0, 18], &[12]], [&[0, 6], &[0, 6, 0, 6], &[12, 6]]]),
    ];
    let e_mats = vec![
        block([[&[20, 28, 20, 28], &[], &[0, 20, 28]], [&[0, 20, 28, 8, 4], &[], &[0, 0, 32, 16]]]),
        block([[&[32, 0, 0, 0, 28], &[0, 0, 20, 28], &[16, 16, 4]], [&[], &[20, 28, 0, 28, 32], &[0, 12, 24]]]),
        block([[&[20, 20, 32], &[20, 28], &[12, 0, 0, 0, 24]], [&[24, 28, 8], &[], &[12, 24]]]),
    ];
    QuerySecrets {
        d: PAPER_D,
        gamma: PAPER_GAMMA,
        a_mats,
        e_mats,
        u_diag: vec![p(&[9, 9]), p(&[27, 27])],
    }
}

/// A suite over any valid `(m, n)` with `n >= 2` where retrieval entries
/// meeting the repair condition exist and condition 3 holds.
///
/// `C_IN = <m'(x - 1)>`, which is `p <x - 1>` at every prime. Every outer
/// code is `<g~>` with `g~ = x - 1 + p_i` at prime `p_i`; these are
/// non-free, so none is a Hensel lift. `C~ ∩ C_IN^perp` is `pR` at every
/// prime and a draw `p b` passes exactly when `b(1) ≠ 0 mod p` at every
/// prime. `M` is upper triangular with unit diagonal.
pub fn repairable_suite(m: u64, n: usize, s: usize) -> Result<CodeSuite> {
    if n < 2 || s == 0 {
        return Err(Error::InvalidParams("the repairable suite needs n >= 2 and s >= 1".into()));
    }
    let modulus = Modulus::new(m)?;
    let mp = modulus.m_prime() as i64;
    let g_in = RingPoly::new(&[-mp, mp], n, m)?;
    let parts = modulus
        .factors()
        .iter()
        .map(|f| RingPoly::new(&[f.p as i64 - 1, 1], n, f.modulus()))
        .collect::<Result<Vec<_>>>()?;
    let g = RingPoly::crt_combine(&parts, &modulus)?;
    let rows: Vec<Vec<i64>> = (0..s).map(|i| (0..s).map(|j| (j >= i) as i64).collect()).collect();
    let m_mat = ResidueMatrix::from_rows_with_width(&rows, s, m)?;
    CodeSuite::new(g_in, vec![g; s], m_mat)
}

/// Resolves a fixture name against the requested parameters.
pub fn named_suite(name: &str, params: &SchemeParams) -> Result<CodeSuite> {
    match name {
        "worked" => {
            let fixed = paper_params();
            if (params.m(), params.n, params.s) != (fixed.m(), fixed.n, fixed.s) {
                return Err(Error::Config(
                    "the `worked` suite is only defined for m = 36, n = 5, s = 3".into(),
                ));
            }
            Ok(paper_suite())
        }
        "repairable" => repairable_suite(params.m(), params.n, params.s),
        other => Err(Error::Config(format!("unknown suite `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repairable_outer_generator_over_z36() {
        let suite = repairable_suite(36, 5, 3).unwrap();
        assert_eq!(suite.tilde_gens[0], RingPoly::new(&[29, 1], 5, 36).unwrap());
        assert_eq!(suite.g_in, RingPoly::new(&[30, 6], 5, 36).unwrap());
        let report = suite.validate();
        assert!(report.usable());
        assert!(report.condition3());
        assert!(report.m_invertible);
    }

    #[test]
    fn paper_suite_conditions() {
        let report = paper_suite().validate();
        assert!(report.condition1());
        assert!(report.condition2());
        assert!(!report.condition3());
        assert!(!report.m_invertible);
        assert_eq!(report.det_m, Some(34));
    }

    #[test]
    fn fixture_names() {
        let params = paper_params();
        assert!(named_suite("worked", &params).is_ok());
        assert!(named_suite("repairable", &params).is_ok());
        assert!(named_suite("other", &params).is_err());
        let wider = SchemeParams::new(36, 7, 3, 2, 3, 3).unwrap();
        assert!(named_suite("worked", &wider).is_err());
    }
}
