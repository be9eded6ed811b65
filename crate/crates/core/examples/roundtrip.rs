//! One private retrieval on a random database.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpir::pir::fixture::repairable_suite;
use ringpir::pir::{query_gen, recover, server_respond, Database, QueryOptions, SchemeParams};

fn main() -> ringpir::error::Result<()> {
    let params = SchemeParams::new(36, 5, 3, 2, 5, 3)?;
    let suite = repairable_suite(36, 5, 3)?;
    let report = suite.validate();
    println!("suite usable: {}, no Hensel lifts: {}", report.usable(), report.no_hensel_lifts);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let db = Database::random(&params, &mut rng);
    let d = 4;
    let opts = QueryOptions { repair: true, ..QueryOptions::default() };
    let (query, secrets) = query_gen(&params, &suite, d, opts, &mut rng)?;
    println!("query: {} x {} over Z_{}", query.q.rows(), query.q.cols(), params.m());

    let resp = server_respond(&db, &query)?;
    let file = recover(&resp, &suite, &secrets, &params)?;
    println!("file {d}:\n{file}");
    assert_eq!(file, db.file(d)?);
    Ok(())
}
