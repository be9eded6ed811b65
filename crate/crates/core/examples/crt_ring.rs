//! Splitting polynomials and matrices over Z_36 into their Z_4 and Z_9
//! images and putting them back together.

use ringpir::ring::{Crt, Modulus, ResidueMatrix, RingPoly};

fn main() -> ringpir::error::Result<()> {
    let modulus = Modulus::new(36)?;
    println!("m = {}, m' = {}", modulus.m(), modulus.m_prime());

    let g = RingPoly::new(&[20, 28], 5, 36)?;
    let parts = g.crt_split(&modulus);
    for (f, part) in modulus.factors().iter().zip(&parts) {
        println!("  mod {}: {}", f.modulus(), part);
    }
    assert_eq!(RingPoly::crt_combine(&parts, &modulus)?, g);

    let h = RingPoly::new(&[1, 9], 5, 36)?;
    println!("({g}) * ({h}) = {}", g.mul(&h)?);

    let m = ResidueMatrix::from_rows(&[[1, 0, 2], [0, 1, 0], [1, 1, 0]], 36)?;
    let images = m.crt_split(&modulus);
    println!("M mod 4:\n{}", images[0]);
    println!("M mod 9:\n{}", images[1]);
    Ok(())
}
