use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::modulus::reduce_signed;

/// Dense row-major matrix over `Z_q` with entries kept in `[0, q)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl ResidueMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        ResidueMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut out = Self::zeros(n, n, modulus);
        for i in 0..n {
            out.set(i, i, 1 % modulus);
        }
        out
    }

    /// Builds from row-major data, reducing every entry.
    pub fn from_vec(rows: usize, cols: usize, modulus: u64, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % modulus).collect();
        Ok(ResidueMatrix {
            rows,
            cols,
            modulus,
            data,
        })
    }

    /// Builds from signed rows; all rows must have equal length. An empty
    /// slice yields a `0 x 0` matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], modulus: u64) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_width(rows, cols, modulus)
    }

    pub fn from_rows_with_width<R: AsRef<[i64]>>(
        rows: &[R],
        cols: usize,
        modulus: u64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a matrix of width {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| reduce_signed(x, modulus)));
        }
        Ok(ResidueMatrix {
            rows: rows.len(),
            cols,
            modulus,
            data,
        })
    }

    pub fn from_row_vectors(rows: &[Vec<u64>], cols: usize, modulus: u64) -> Result<Self> {
        let mut out = Self::zeros(0, cols, modulus);
        for r in rows {
            out.push_row(r)?;
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[u64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "pushing a row of length {} onto width {}",
                row.len(),
                self.cols
            )));
        }
        let q = self.modulus;
        self.data.extend(row.iter().map(|&x| x % q));
        self.rows += 1;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.modulus);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.shape() != other.shape() || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch(format!(
                "{op}: {}x{} mod {} vs {}x{} mod {}",
                self.rows, self.cols, self.modulus, other.rows, other.cols, other.modulus
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let q = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % q)
            .collect();
        Ok(ResidueMatrix { data, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let q = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + q - b) % q)
            .collect();
        Ok(ResidueMatrix { data, ..*self })
    }

    pub fn scale(&self, k: u64) -> Self {
        let q = self.modulus;
        let k = k % q;
        let data = self.data.iter().map(|&a| a * k % q).collect();
        ResidueMatrix { data, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch(format!(
                "mul: {}x{} mod {} times {}x{} mod {}",
                self.rows, self.cols, self.modulus, other.rows, other.cols, other.modulus
            )));
        }
        let q = self.modulus;
        let mut out = Self::zeros(self.rows, other.cols, q);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (dst, &b) in acc.iter_mut().zip(brow) {
                    *dst = (*dst + a * b) % q;
                }
            }
        }
        Ok(out)
    }

    /// Reduces every entry modulo a divisor of the current modulus.
    pub fn reduce(&self, modulus: u64) -> Self {
        debug_assert_eq!(self.modulus % modulus, 0);
        ResidueMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus,
            data: self.data.iter().map(|&x| x % modulus).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(0, self.cols, self.modulus);
        for &r in idx {
            out.data.extend_from_slice(self.row(r));
            out.rows += 1;
        }
        out
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        ResidueMatrix {
            rows: end - start,
            cols: self.cols,
            modulus: self.modulus,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn col_range(&self, start: usize, end: usize) -> Self {
        let w = end - start;
        let mut data = Vec::with_capacity(self.rows * w);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        ResidueMatrix {
            rows: self.rows,
            cols: w,
            modulus: self.modulus,
            data,
        }
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch(format!(
                "vstack: widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ResidueMatrix {
            rows: self.rows + other.rows,
            data,
            ..*self
        })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch(format!(
                "hstack: heights {} and {}",
                self.rows, other.rows
            )));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(ResidueMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            modulus: self.modulus,
            data,
        })
    }

    /// Appends zero rows until the matrix has `rows` rows.
    pub fn pad_rows(&self, rows: usize) -> Self {
        let mut out = self.clone();
        if rows > out.rows {
            out.data.resize(rows * out.cols, 0);
            out.rows = rows;
        }
        out
    }

    /// Row vector times matrix transpose: `v * self^T`.
    pub fn apply_transpose(&self, v: &[u64]) -> Vec<u64> {
        let q = self.modulus;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * (b % q)) % q)
            })
            .collect()
    }
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} mod {}]", self.rows, self.cols, self.modulus)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for r in 0..self.rows {
            let cells: Vec<String> = self
                .row(r)
                .iter()
                .map(|x| format!("{x:>width$}"))
                .collect();
            writeln!(f, "({})", cells.join(" "))?;
        }
        Ok(())
    }
}
