//! Exact arithmetic over `Z_m`, `Z_{p^e}` and `Z_q[x]/(x^n - 1)`, plus the
//! CRT maps between them.

pub mod crt;
pub mod matrix;
pub mod modulus;
pub mod poly;

pub use crt::Crt;
pub use matrix::ResidueMatrix;
pub use modulus::{validate_modulus, Modulus, PrimePower};
pub use poly::{PolyMatrix, RingPoly};
