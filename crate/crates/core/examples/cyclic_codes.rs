//! Cyclic codes over Z_9 and Z_8: generating sets, Hensel lifts and
//! freeness.

use ringpir::cyclic::{hensel_lift_poly, is_free_cyclic, CyclicCode};
use ringpir::ring::{PrimePower, RingPoly};

fn main() -> ringpir::error::Result<()> {
    let z9 = PrimePower::new(3, 2);
    let code = CyclicCode::from_generators(&[RingPoly::new(&[2, 1], 5, 9)?], z9)?;
    println!("<x + 2> over Z_9, n = 5");
    for term in code.genset().terms() {
        println!("  3^{} * ({})", term.a, term.g);
    }
    println!("  generator polynomial {}", code.generator_polynomial());
    println!("  subtype {:?}, free {}", code.linear().subtype().counts(), is_free_cyclic(&code));
    println!("  non-free part rank {}", code.non_free_part()?.linear().rank());

    // x^3 + x + 1 divides x^7 - 1 over F_2.
    let z8 = PrimePower::new(2, 3);
    let lift = hensel_lift_poly(&[1, 1, 0, 1], 7, z8)?;
    println!("lift of x^3 + x + 1 to Z_8: {lift}");
    let free = CyclicCode::from_generators(&[lift], z8)?;
    println!("  free: {}, rank {}", free.is_free(), free.linear().rank());
    Ok(())
}
