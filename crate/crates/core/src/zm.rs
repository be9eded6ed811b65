//! Linear codes over `Z_m`, held as one [`ChainCode`] per prime power.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::ChainCode;
use crate::error::{Error, Result};
use crate::ring::crt::{combine_vectors, split_vector};
use crate::ring::{Crt, Modulus, ResidueMatrix};

/// Attempts allowed when rejection-sampling the non-free part.
pub const NF_SAMPLE_CAP: usize = 1_000_000;

/// How the non-free part of a code over `Z_m` is read from its projections.
///
/// `Standard`: `c` is non-free when some projection lies in that
/// component's non-free part. `Alternative`: every projection must.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NfConvention {
    Standard,
    #[default]
    Alternative,
}

impl NfConvention {
    pub const ALL: [NfConvention; 2] = [NfConvention::Standard, NfConvention::Alternative];
}

impl fmt::Display for NfConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NfConvention::Standard => "standard",
            NfConvention::Alternative => "alternative",
        })
    }
}

impl FromStr for NfConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(NfConvention::Standard),
            "alternative" => Ok(NfConvention::Alternative),
            other => Err(Error::Config(format!("unknown nf convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZmCode {
    modulus: Modulus,
    n: usize,
    components: Vec<ChainCode>,
    generator: Option<ResidueMatrix>,
}

impl ZmCode {
    /// The code spanned over `Z_m` by the rows of `g`.
    pub fn from_generator(g: &ResidueMatrix, modulus: &Modulus) -> Result<Self> {
        if g.modulus() != modulus.m() {
            return Err(Error::ShapeMismatch(format!(
                "generator over Z_{} for a code over Z_{}",
                g.modulus(),
                modulus.m()
            )));
        }
        let components = modulus
            .factors()
            .iter()
            .zip(g.crt_split(modulus))
            .map(|(&f, gi)| ChainCode::from_generator(&gi, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZmCode {
            modulus: modulus.clone(),
            n: g.cols(),
            components,
            generator: Some(g.clone()),
        })
    }

    /// Bundles per-prime codes; they must follow the factor order of
    /// `modulus` and share a length.
    pub fn from_components(components: Vec<ChainCode>, modulus: &Modulus) -> Result<Self> {
        if components.len() != modulus.ell() {
            return Err(Error::ShapeMismatch(format!(
                "{} components for {} prime powers",
                components.len(),
                modulus.ell()
            )));
        }
        let n = components[0].n();
        for (c, f) in components.iter().zip(modulus.factors()) {
            if c.n() != n || c.ring() != *f {
                return Err(Error::ShapeMismatch("component does not match modulus".into()));
            }
        }
        Ok(ZmCode {
            modulus: modulus.clone(),
            n,
            components,
            generator: None,
        })
    }

    pub fn zero(modulus: &Modulus, n: usize) -> Self {
        let components = modulus.factors().iter().map(|&f| ChainCode::zero(f, n)).collect();
        ZmCode::from_components(components, modulus).expect("consistent components")
    }

    pub fn full(modulus: &Modulus, n: usize) -> Self {
        let components = modulus.factors().iter().map(|&f| ChainCode::full(f, n)).collect();
        ZmCode::from_components(components, modulus).expect("consistent components")
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[ChainCode] {
        &self.components
    }

    /// `phi_i(C)`, with `i` counted from zero in factor order.
    pub fn project(&self, i: usize) -> Result<&ChainCode> {
        self.components.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.components.len(),
        })
    }

    /// A generator over `Z_m`: the one supplied at construction, otherwise
    /// the CRT combination of the component generators.
    pub fn generator(&self) -> ResidueMatrix {
        if let Some(g) = &self.generator {
            return g.clone();
        }
        let gens: Vec<ResidueMatrix> = self.components.iter().map(|c| c.generator()).collect();
        let rows = gens.iter().map(|g| g.rows()).max().unwrap_or(0);
        let padded: Vec<ResidueMatrix> = gens.iter().map(|g| g.pad_rows(rows)).collect();
        ResidueMatrix::crt_combine(&padded, &self.modulus).expect("matching shapes")
    }

    /// Free means every projection is free and all share one rank.
    pub fn is_free(&self) -> bool {
        let rank = self.components[0].rank();
        self.components.iter().all(|c| c.is_free() && c.rank() == rank)
    }

    pub fn contains(&self, w: &[u64]) -> bool {
        w.len() == self.n
            && split_vector(w, &self.modulus)
                .iter()
                .zip(&self.components)
                .all(|(wi, c)| c.contains(wi))
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let parts: Vec<Vec<u64>> = self.components.iter().map(|c| c.random_codeword(rng)).collect();
        combine_vectors(&parts, &self.modulus).expect("equal lengths")
    }

    /// `n x n` parity check: each component check is padded with zero rows
    /// to `n` rows and the results are CRT-combined.
    pub fn parity_check(&self) -> ResidueMatrix {
        let parts: Vec<ResidueMatrix> = self
            .components
            .iter()
            .map(|c| c.parity_check().pad_rows(self.n))
            .collect();
        ResidueMatrix::crt_combine(&parts, &self.modulus).expect("matching shapes")
    }

    pub fn dual(&self) -> ZmCode {
        let components = self.components.iter().map(|c| c.dual()).collect();
        ZmCode::from_components(components, &self.modulus).expect("duals keep shape")
    }

    pub fn intersect(&self, other: &ZmCode) -> Result<ZmCode> {
        if self.n != other.n || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch("intersecting codes over different spaces".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.intersect(b))
            .collect::<Result<Vec<_>>>()?;
        ZmCode::from_components(components, &self.modulus)
    }

    pub fn row_span_equal(&self, other: &ZmCode) -> bool {
        self.n == other.n
            && self.modulus == other.modulus
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.row_span_equal(b))
    }

    pub fn is_subcode_of(&self, other: &ZmCode) -> bool {
        self.n == other.n
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.is_subcode_of(b))
    }

    /// Per-prime non-free parts. A free code has none anywhere; the zero
    /// code's non-free part is `{0}`.
    pub fn component_nonfree_parts(&self) -> Vec<ChainCode> {
        self.components.iter().map(|c| c.non_free_part()).collect()
    }

    /// Whether the non-free part under `conv` contains a nonzero word.
    pub fn has_nonfree(&self, conv: NfConvention) -> bool {
        if self.is_free() {
            return false;
        }
        match conv {
            NfConvention::Standard => true,
            NfConvention::Alternative => self.components.iter().any(|c| !c.non_free_part().is_zero()),
        }
    }

    /// Membership of a codeword in the non-free part.
    pub fn nf_membership(&self, w: &[u64], conv: NfConvention) -> Result<bool> {
        if !self.contains(w) {
            return Err(Error::NotInCode);
        }
        if w.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        if self.is_free() {
            return Ok(false);
        }
        let parts = split_vector(w, &self.modulus);
        let mut hits = parts
            .iter()
            .zip(&self.components)
            .map(|(wi, c)| c.non_free_part().contains(wi));
        Ok(match conv {
            NfConvention::Standard => hits.any(|b| b),
            NfConvention::Alternative => hits.all(|b| b),
        })
    }

    /// A random element of the non-free part.
    ///
    /// `Alternative` draws uniformly from the product of the component
    /// non-free parts. `Standard` rejection-samples uniform codewords.
    pub fn sample_nonfree<R: Rng + ?Sized>(&self, conv: NfConvention, rng: &mut R) -> Result<Vec<u64>> {
        if !self.has_nonfree(conv) {
            return Err(Error::EmptyNonFreePart);
        }
        match conv {
            NfConvention::Alternative => {
                let parts: Vec<Vec<u64>> = self
                    .component_nonfree_parts()
                    .iter()
                    .map(|nf| nf.random_codeword(rng))
                    .collect();
                combine_vectors(&parts, &self.modulus)
            }
            NfConvention::Standard => {
                let nfs = self.component_nonfree_parts();
                for _ in 0..NF_SAMPLE_CAP {
                    let w = self.random_codeword(rng);
                    let parts = split_vector(&w, &self.modulus);
                    if parts.iter().zip(&nfs).any(|(wi, nf)| nf.contains(wi)) {
                        return Ok(w);
                    }
                }
                Err(Error::SamplerExhausted {
                    what: "standard non-free part".into(),
                    attempts: NF_SAMPLE_CAP,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m36() -> Modulus {
        Modulus::new(36).unwrap()
    }

    fn circulant(coeffs: &[i64], n: usize, q: u64) -> ResidueMatrix {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|t| {
                let mut row = vec![0i64; n];
                for (k, &c) in coeffs.iter().enumerate() {
                    row[(k + t) % n] = c;
                }
                row
            })
            .collect();
        ResidueMatrix::from_rows(&rows, q).unwrap()
    }

    fn c_in() -> ZmCode {
        ZmCode::from_generator(&circulant(&[20, 28], 5, 36), &m36()).unwrap()
    }

    #[test]
    fn projections_of_the_inner_code() {
        let c = c_in();
        assert!(c.project(0).unwrap().is_zero());
        let h9 = c.project(1).unwrap().parity_check();
        assert_eq!(h9.row_vectors(), vec![vec![3, 3, 3, 3, 3]]);
        assert!(c.project(2).is_err());
        assert!(!c.is_free());
    }

    #[test]
    fn inner_parity_check_matches_printed_matrix() {
        let printed = ResidueMatrix::from_rows(
            &[
                [21, 12, 12, 12, 12],
                [0, 9, 0, 0, 0],
                [0, 0, 9, 0, 0],
                [0, 0, 0, 9, 0],
                [0, 0, 0, 0, 9],
            ],
            36,
        )
        .unwrap();
        let h = c_in().parity_check();
        let a = ZmCode::from_generator(&h, &m36()).unwrap();
        let b = ZmCode::from_generator(&printed, &m36()).unwrap();
        assert!(a.row_span_equal(&b));
    }

    #[test]
    fn freeness() {
        assert!(ZmCode::full(&m36(), 3).is_free());
        assert!(ZmCode::zero(&m36(), 3).is_free());
        let g = ResidueMatrix::from_rows(&[[2, 0], [0, 1]], 36).unwrap();
        assert!(!ZmCode::from_generator(&g, &m36()).unwrap().is_free());
    }

    #[test]
    fn trivial_parity_checks() {
        let m = m36();
        assert!(ZmCode::full(&m, 4).parity_check().is_zero());
        assert_eq!(ZmCode::zero(&m, 4).parity_check(), ResidueMatrix::identity(4, 36));
    }

    #[test]
    fn duals_and_intersections() {
        let m = m36();
        let c = c_in();
        assert!(ZmCode::zero(&m, 5).dual().row_span_equal(&ZmCode::full(&m, 5)));
        assert!(c.dual().dual().row_span_equal(&c));
        assert!(c.dual().contains(&[9, 9, 0, 0, 0]));
        assert!(c.intersect(&ZmCode::full(&m, 5)).unwrap().row_span_equal(&c));
        assert!(c.intersect(&ZmCode::zero(&m, 5)).unwrap().row_span_equal(&ZmCode::zero(&m, 5)));
    }

    #[test]
    fn nf_membership_conventions() {
        let c = c_in();
        for conv in NfConvention::ALL {
            assert!(c.nf_membership(&[0; 5], conv).unwrap());
        }
        assert!(matches!(
            c.nf_membership(&[1, 0, 0, 0, 0], NfConvention::Standard),
            Err(Error::NotInCode)
        ));
        let full = ZmCode::full(&m36(), 2);
        for conv in NfConvention::ALL {
            assert!(!full.nf_membership(&[1, 0], conv).unwrap());
        }
    }

    #[test]
    fn sampling_respects_the_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = c_in();
        for conv in NfConvention::ALL {
            for _ in 0..50 {
                let w = c.sample_nonfree(conv, &mut rng).unwrap();
                assert!(c.nf_membership(&w, conv).unwrap());
                if conv == NfConvention::Alternative {
                    assert!(w.iter().all(|x| x % 6 == 0));
                }
            }
        }
        let free = ZmCode::full(&m36(), 3);
        assert!(matches!(
            free.sample_nonfree(NfConvention::Standard, &mut rng),
            Err(Error::EmptyNonFreePart)
        ));
    }

    #[test]
    fn convention_parsing() {
        assert_eq!("Standard".parse::<NfConvention>().unwrap(), NfConvention::Standard);
        assert_eq!(NfConvention::default().to_string(), "alternative");
        assert!("both".parse::<NfConvention>().is_err());
    }
}
