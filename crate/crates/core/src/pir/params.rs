use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{validate_modulus, Modulus};

/// Sizes of one scheme instance: modulus `m`, code length `n`, outer
/// length `s`, file width `r`, file count `t` and file height `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub modulus: Modulus,
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub t: usize,
    pub l: usize,
}

impl SchemeParams {
    pub fn new(m: u64, n: usize, s: usize, r: usize, t: usize, l: usize) -> Result<Self> {
        let modulus = validate_modulus(m, n)?;
        if r == 0 || t == 0 || l == 0 {
            return Err(Error::InvalidParams("r, t and L must be positive".into()));
        }
        if s < r {
            return Err(Error::InvalidParams(format!("s = {s} must be at least r = {r}")));
        }
        Ok(SchemeParams { modulus, n, s, r, t, l })
    }

    pub fn m(&self) -> u64 {
        self.modulus.m()
    }

    pub fn m_prime(&self) -> u64 {
        self.modulus.m_prime()
    }

    /// Number of admissible column offsets `gamma`, i.e. `s - r + 1`.
    pub fn gamma_choices(&self) -> usize {
        self.s - self.r + 1
    }

    pub fn check_index(&self, d: usize) -> Result<()> {
        if d == 0 || d > self.t {
            return Err(Error::InvalidIndex { index: d, t: self.t });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let p = SchemeParams::new(36, 5, 3, 2, 3, 3).unwrap();
        assert_eq!((p.m(), p.m_prime(), p.gamma_choices()), (36, 6, 2));
        assert!(SchemeParams::new(36, 5, 1, 2, 3, 3).is_err());
        assert!(SchemeParams::new(36, 6, 3, 2, 3, 3).is_err());
        assert!(matches!(p.check_index(4), Err(Error::InvalidIndex { index: 4, t: 3 })));
        assert!(p.check_index(3).is_ok());
    }
}
