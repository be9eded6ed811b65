//! The maps `phi_i: Z_m -> Z_{p_i^{e_i}}` and `Phi = (phi_1, ..., phi_l)`,
//! applied entrywise, and the inverse of `Phi`.

use crate::error::{Error, Result};
use crate::ring::matrix::ResidueMatrix;
use crate::ring::modulus::{inv_mod, Modulus};
use crate::ring::poly::{PolyMatrix, RingPoly};

/// Values that can be split into their CRT components and recombined.
pub trait Crt: Sized {
    /// Reduces entrywise modulo each `p_i^{e_i}`.
    fn crt_split(&self, modulus: &Modulus) -> Vec<Self>;

    /// The exact inverse of [`Crt::crt_split`]; all images must share a shape.
    fn crt_combine(images: &[Self], modulus: &Modulus) -> Result<Self>;
}

/// Idempotents `c_i` with `c_i = 1 mod p_i^{e_i}` and `c_i = 0` modulo the
/// other components.
fn idempotents(modulus: &Modulus) -> Vec<u64> {
    let m = modulus.m();
    modulus
        .factors()
        .iter()
        .map(|f| {
            let q = f.modulus();
            let cofactor = m / q;
            let inv = inv_mod(cofactor % q, q).expect("CRT components are coprime");
            cofactor % m * inv % m
        })
        .collect()
}

fn check_count<T>(images: &[T], modulus: &Modulus) -> Result<()> {
    if images.len() != modulus.ell() {
        return Err(Error::ShapeMismatch(format!(
            "{} CRT images for {} components",
            images.len(),
            modulus.ell()
        )));
    }
    Ok(())
}

/// Combines one residue per component into a residue mod `m`.
pub fn combine_scalars(images: &[u64], modulus: &Modulus) -> Result<u64> {
    check_count(images, modulus)?;
    let m = modulus.m();
    Ok(idempotents(modulus)
        .iter()
        .zip(images)
        .fold(0u64, |acc, (&c, &x)| (acc + c * (x % m)) % m))
}

pub fn split_scalar(x: u64, modulus: &Modulus) -> Vec<u64> {
    modulus.factors().iter().map(|f| x % f.modulus()).collect()
}

fn combine_slices(images: &[&[u64]], modulus: &Modulus) -> Result<Vec<u64>> {
    check_count(images, modulus)?;
    let len = images[0].len();
    if images.iter().any(|v| v.len() != len) {
        return Err(Error::ShapeMismatch("CRT images differ in length".into()));
    }
    let m = modulus.m();
    let idem = idempotents(modulus);
    Ok((0..len)
        .map(|k| {
            idem.iter()
                .zip(images)
                .fold(0u64, |acc, (&c, v)| (acc + c * (v[k] % m)) % m)
        })
        .collect())
}

/// Combines equal-length vectors, one per component.
pub fn combine_vectors(images: &[Vec<u64>], modulus: &Modulus) -> Result<Vec<u64>> {
    let slices: Vec<&[u64]> = images.iter().map(|v| v.as_slice()).collect();
    combine_slices(&slices, modulus)
}

pub fn split_vector(v: &[u64], modulus: &Modulus) -> Vec<Vec<u64>> {
    modulus
        .factors()
        .iter()
        .map(|f| v.iter().map(|&x| x % f.modulus()).collect())
        .collect()
}

impl Crt for ResidueMatrix {
    fn crt_split(&self, modulus: &Modulus) -> Vec<Self> {
        modulus.factors().iter().map(|f| self.reduce(f.modulus())).collect()
    }

    fn crt_combine(images: &[Self], modulus: &Modulus) -> Result<Self> {
        check_count(images, modulus)?;
        let shape = images[0].shape();
        if images.iter().any(|im| im.shape() != shape) {
            return Err(Error::ShapeMismatch("CRT images differ in shape".into()));
        }
        let slices: Vec<&[u64]> = images.iter().map(|im| im.data()).collect();
        ResidueMatrix::from_vec(shape.0, shape.1, modulus.m(), combine_slices(&slices, modulus)?)
    }
}

impl Crt for RingPoly {
    fn crt_split(&self, modulus: &Modulus) -> Vec<Self> {
        modulus.factors().iter().map(|f| self.reduce(f.modulus())).collect()
    }

    fn crt_combine(images: &[Self], modulus: &Modulus) -> Result<Self> {
        check_count(images, modulus)?;
        let slices: Vec<&[u64]> = images.iter().map(|p| p.coeffs()).collect();
        Ok(RingPoly::from_residues(combine_slices(&slices, modulus)?, modulus.m()))
    }
}

impl Crt for PolyMatrix {
    fn crt_split(&self, modulus: &Modulus) -> Vec<Self> {
        self.flat()
            .crt_split(modulus)
            .into_iter()
            .map(|f| PolyMatrix::from_flat(f, self.n()).expect("same width"))
            .collect()
    }

    fn crt_combine(images: &[Self], modulus: &Modulus) -> Result<Self> {
        check_count(images, modulus)?;
        let n = images[0].n();
        let flats: Vec<ResidueMatrix> = images.iter().map(|p| p.expand_flat()).collect();
        PolyMatrix::from_flat(ResidueMatrix::crt_combine(&flats, modulus)?, n)
    }
}
