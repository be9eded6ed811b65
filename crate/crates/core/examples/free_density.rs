//! How often a random generator matrix gives a free code.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpir::attack::empirical_free_density;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (p, e, rank, length) in [(2, 2, 8, 20), (2, 2, 10, 12), (3, 2, 4, 10), (2, 3, 6, 6)] {
        let f = empirical_free_density(p, e, length, rank, 1000, &mut rng);
        println!("{rank:>2} x {length:<2} over Z_{:<2}  {f:.3}", p.pow(e));
    }
}
