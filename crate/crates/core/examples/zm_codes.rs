//! A code over Z_36 seen through its two components, and the two readings
//! of its non-free part.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpir::cyclic::ideal_code;
use ringpir::ring::{Modulus, RingPoly};
use ringpir::zm::NfConvention;

fn main() -> ringpir::error::Result<()> {
    let modulus = Modulus::new(36)?;
    let c_in = ideal_code(&RingPoly::new(&[20, 28], 5, 36)?, &modulus)?;
    for (i, c) in c_in.components().iter().enumerate() {
        println!("component {i} over Z_{}: subtype {:?}", c.ring().modulus(), c.subtype().counts());
    }
    println!("H =\n{}", c_in.parity_check());

    // The generator is non-free at one prime only.
    let g = [20, 28, 0, 0, 0];
    for conv in NfConvention::ALL {
        println!("{g:?} in nf ({conv}): {}", c_in.nf_membership(&g, conv)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for conv in NfConvention::ALL {
        let w = c_in.sample_nonfree(conv, &mut rng)?;
        println!("sampled ({conv}): {w:?}, member: {}", c_in.nf_membership(&w, conv)?);
    }
    Ok(())
}
