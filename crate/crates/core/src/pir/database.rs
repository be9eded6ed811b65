use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pir::params::SchemeParams;
use crate::ring::ResidueMatrix;

/// `t` files of shape `L x r` over `Z_{m'}`, stored side by side as an
/// `L x rt` matrix. This is also the on-disk JSON layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Database {
    pub m: u64,
    pub m_prime: u64,
    #[serde(rename = "L")]
    pub l: usize,
    pub r: usize,
    pub t: usize,
    pub rows: Vec<Vec<u64>>,
}

impl Database {
    pub fn new(params: &SchemeParams, rows: Vec<Vec<u64>>) -> Result<Self> {
        let db = Database {
            m: params.m(),
            m_prime: params.m_prime(),
            l: params.l,
            r: params.r,
            t: params.t,
            rows,
        };
        db.validate()?;
        Ok(db)
    }

    pub fn random<R: Rng + ?Sized>(params: &SchemeParams, rng: &mut R) -> Self {
        let rows = (0..params.l)
            .map(|_| (0..params.r * params.t).map(|_| rng.gen_range(0..params.m_prime())).collect())
            .collect();
        Database::new(params, rows).expect("sampled entries are in range")
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.l {
            return Err(Error::ShapeMismatch(format!("{} rows, L = {}", self.rows.len(), self.l)));
        }
        let width = self.r * self.t;
        for row in &self.rows {
            if row.len() != width {
                return Err(Error::ShapeMismatch(format!("row of width {}, rt = {width}", row.len())));
            }
            if let Some(x) = row.iter().find(|&&x| x >= self.m_prime) {
                return Err(Error::InvalidParams(format!("entry {x} is not below m' = {}", self.m_prime)));
            }
        }
        if !self.m.is_multiple_of(self.m_prime) {
            return Err(Error::InvalidParams("m' must divide m".into()));
        }
        Ok(())
    }

    /// The whole database embedded in `Z_m`.
    pub fn matrix(&self) -> ResidueMatrix {
        ResidueMatrix::from_row_vectors(&self.rows, self.r * self.t, self.m).expect("validated shape")
    }

    /// File `d` (1-based) as an `L x r` matrix over `Z_{m'}`.
    pub fn file(&self, d: usize) -> Result<ResidueMatrix> {
        if d == 0 || d > self.t {
            return Err(Error::InvalidIndex { index: d, t: self.t });
        }
        let rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|row| row[(d - 1) * self.r..d * self.r].to_vec())
            .collect();
        ResidueMatrix::from_row_vectors(&rows, self.r, self.m_prime)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let db: Database = serde_json::from_str(&fs::read_to_string(path)?)?;
        db.validate()?;
        Ok(db)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
