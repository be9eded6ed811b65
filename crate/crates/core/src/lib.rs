//! Linear codes over `Z_m` and `Z_m[x]/(x^n - 1)`, a single-server PIR
//! scheme built from nested codes, and a rank-difference attack on it.

pub mod attack;
pub mod chain;
pub mod cyclic;
pub mod error;
pub mod experiment;
pub mod pir;
mod polyalg;
pub mod ring;
pub mod zm;
