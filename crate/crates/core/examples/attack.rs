//! The server recovers the queried index from the query alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpir::attack::{attack, bounds};
use ringpir::pir::fixture::repairable_suite;
use ringpir::pir::{query_gen, QueryOptions, SchemeParams};
use ringpir::zm::NfConvention;

fn main() -> ringpir::error::Result<()> {
    let (n, s, r) = (5, 3, 2);
    let t = bounds(n, s, r, None).t_general;
    let params = SchemeParams::new(36, n, s, r, t, 3)?;
    let suite = repairable_suite(36, n, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    for d in [1, 9, t] {
        let (query, _) = query_gen(&params, &suite, d, QueryOptions::default(), &mut rng)?;
        let res = attack(&query.q, &params, NfConvention::Alternative)?;
        println!("planted {d:>2} -> {:?}", res.verdict);
        for p in &res.per_prime {
            println!("    p = {}: dims {:?}", p.p, p.dims);
        }
    }
    Ok(())
}
