use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::matrix::ResidueMatrix;
use crate::ring::modulus::{gcd, reduce_signed};

/// An element of `Z_q[x]/(x^n - 1)`, stored as `n` coefficients in
/// ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingPoly {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl RingPoly {
    /// Builds a ring element from ascending coefficients; the slice may be
    /// shorter than `n` (implicit zeros) but not longer.
    pub fn new(coeffs: &[i64], n: usize, modulus: u64) -> Result<Self> {
        check_ring(n, modulus)?;
        if coeffs.len() > n {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for length {n}",
                coeffs.len()
            )));
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&x| reduce_signed(x, modulus)).collect();
        c.resize(n, 0);
        Ok(RingPoly { coeffs: c, modulus })
    }

    /// Wraps an already reduced coefficient vector of length `n`.
    pub fn from_residues(coeffs: Vec<u64>, modulus: u64) -> Self {
        let coeffs = coeffs.into_iter().map(|x| x % modulus).collect();
        RingPoly { coeffs, modulus }
    }

    pub fn zero(n: usize, modulus: u64) -> Self {
        RingPoly {
            coeffs: vec![0; n],
            modulus,
        }
    }

    pub fn one(n: usize, modulus: u64) -> Self {
        Self::monomial(0, 1, n, modulus)
    }

    /// `c * x^k`, with `k` taken modulo `n`.
    pub fn monomial(k: usize, c: u64, n: usize, modulus: u64) -> Self {
        let mut out = Self::zero(n, modulus);
        out.coeffs[k % n] = c % modulus;
        out
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch(format!(
                "ring elements of (n={}, q={}) and (n={}, q={})",
                self.n(),
                self.modulus,
                other.n(),
                other.modulus
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % q)
            .collect();
        Ok(RingPoly { coeffs, modulus: q })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + q - b) % q)
            .collect();
        Ok(RingPoly { coeffs, modulus: q })
    }

    pub fn scale(&self, k: u64) -> Self {
        let q = self.modulus;
        let k = k % q;
        RingPoly {
            coeffs: self.coeffs.iter().map(|&a| a * k % q).collect(),
            modulus: q,
        }
    }

    /// Cyclic convolution: the product in `Z_q[x]/(x^n - 1)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.n();
        let q = self.modulus;
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % n;
                out[k] = (out[k] + a * b) % q;
            }
        }
        Ok(RingPoly {
            coeffs: out,
            modulus: q,
        })
    }

    /// Multiplication by `x^k`: a cyclic right shift of the coefficients.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.n();
        let mut out = vec![0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(i + k) % n] = c;
        }
        RingPoly {
            coeffs: out,
            modulus: self.modulus,
        }
    }

    /// Reduces coefficients modulo a divisor of the current modulus.
    pub fn reduce(&self, modulus: u64) -> Self {
        debug_assert_eq!(self.modulus % modulus, 0);
        RingPoly {
            coeffs: self.coeffs.iter().map(|&c| c % modulus).collect(),
            modulus,
        }
    }
}

pub(crate) fn check_ring(n: usize, modulus: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("ring length n must be positive".into()));
    }
    let g = gcd(modulus, n as u64);
    if g != 1 {
        return Err(Error::GcdViolation {
            m: modulus,
            n,
            gcd: g,
        });
    }
    Ok(())
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.modulus)
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}x^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A matrix over `Z_q[x]/(x^n - 1)`. The storage is the flat expansion
/// `[.]_m`: an `r x s` matrix over the ring is kept as an `r x sn`
/// [`ResidueMatrix`] with each entry's coefficients laid out horizontally in
/// ascending degree.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    n: usize,
    flat: ResidueMatrix,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, n: usize, modulus: u64) -> Self {
        PolyMatrix {
            rows,
            cols,
            n,
            flat: ResidueMatrix::zeros(rows, cols * n, modulus),
        }
    }

    /// Builds from a grid of ring elements sharing `n` and the modulus.
    pub fn from_entries(entries: &[Vec<RingPoly>]) -> Result<Self> {
        let first = entries
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::ShapeMismatch("empty polynomial matrix".into()))?;
        let (n, q) = (first.n(), first.modulus());
        let cols = entries[0].len();
        let mut out = Self::zeros(entries.len(), cols, n, q);
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch("ragged polynomial matrix".into()));
            }
            for (j, p) in row.iter().enumerate() {
                out.set(i, j, p)?;
            }
        }
        Ok(out)
    }

    /// Inverse of [`PolyMatrix::expand_flat`]: reads each `n`-wide block of
    /// columns as one ring element.
    pub fn from_flat(flat: ResidueMatrix, n: usize) -> Result<Self> {
        if n == 0 || !flat.cols().is_multiple_of(n) {
            return Err(Error::ShapeMismatch(format!(
                "width {} is not a multiple of n = {n}",
                flat.cols()
            )));
        }
        Ok(PolyMatrix {
            rows: flat.rows(),
            cols: flat.cols() / n,
            n,
            flat,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.flat.modulus()
    }

    pub fn get(&self, i: usize, j: usize) -> RingPoly {
        let row = self.flat.row(i);
        RingPoly::from_residues(row[j * self.n..(j + 1) * self.n].to_vec(), self.modulus())
    }

    pub fn set(&mut self, i: usize, j: usize, p: &RingPoly) -> Result<()> {
        if p.n() != self.n || p.modulus() != self.modulus() {
            return Err(Error::ShapeMismatch("entry does not match matrix ring".into()));
        }
        let n = self.n;
        self.flat.row_mut(i)[j * n..(j + 1) * n].copy_from_slice(p.coeffs());
        Ok(())
    }

    /// The flat expansion `[M]_m`: `r x s` over the ring becomes `r x sn`.
    pub fn expand_flat(&self) -> ResidueMatrix {
        self.flat.clone()
    }

    pub fn flat(&self) -> &ResidueMatrix {
        &self.flat
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(PolyMatrix {
            flat: self.flat.add(&other.flat)?,
            ..*self
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(PolyMatrix {
            flat: self.flat.sub(&other.flat)?,
            ..*self
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols, self.n) != (other.rows, other.cols, other.n) {
            return Err(Error::ShapeMismatch("polynomial matrices differ in shape".into()));
        }
        Ok(())
    }

    /// Matrix product over the ring.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.n != other.n || self.modulus() != other.modulus() {
            return Err(Error::ShapeMismatch(format!(
                "polynomial product {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, q) = (self.n, self.modulus());
        let mut out = Self::zeros(self.rows, other.cols, n, q);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = vec![0u64; n];
                for k in 0..self.cols {
                    let a = &self.flat.row(i)[k * n..(k + 1) * n];
                    let b = &other.flat.row(k)[j * n..(j + 1) * n];
                    for (ai, &ac) in a.iter().enumerate() {
                        if ac == 0 {
                            continue;
                        }
                        for (bi, &bc) in b.iter().enumerate() {
                            let d = (ai + bi) % n;
                            acc[d] = (acc[d] + ac * bc) % q;
                        }
                    }
                }
                out.flat.row_mut(i)[j * n..(j + 1) * n].copy_from_slice(&acc);
            }
        }
        Ok(out)
    }

    /// Left multiplication by a scalar matrix over `Z_q`.
    pub fn left_mul_scalar(&self, m: &ResidueMatrix) -> Result<Self> {
        Ok(PolyMatrix {
            rows: m.rows(),
            cols: self.cols,
            n: self.n,
            flat: m.mul(&self.flat)?,
        })
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}x{} over Z_{}[x]/(x^{} - 1)]",
            self.rows,
            self.cols,
            self.modulus(),
            self.n
        )?;
        for i in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  ({})", cells.join(", "))?;
        }
        Ok(())
    }
}
