//! Standard form, subtype and parity check of a code over Z_8.

use ringpir::chain::ChainCode;
use ringpir::ring::{PrimePower, ResidueMatrix};

fn main() -> ringpir::error::Result<()> {
    let ring = PrimePower::new(2, 3);
    let g = ResidueMatrix::from_rows(&[[1, 2, 3, 4, 5], [2, 4, 6, 0, 2], [0, 0, 4, 4, 0]], 8)?;
    let code = ChainCode::from_generator(&g, ring)?;

    println!("generator:\n{g}");
    println!("subtype {:?}, rank {}, |C| = {:?}", code.subtype().counts(), code.rank(), code.cardinality());
    println!("standard form (permuted columns {:?}):\n{}", code.column_permutation(), code.generator_permuted());

    let h = code.parity_check();
    println!("parity check:\n{h}");
    assert!(code.generator().mul(&h.transpose())?.is_zero());

    let dual = code.dual();
    println!("dual subtype {:?}", dual.subtype().counts());
    assert!(dual.dual().row_span_equal(&code));
    println!("free: {}, non-free part rank {}", code.is_free(), code.non_free_part().rank());
    Ok(())
}
