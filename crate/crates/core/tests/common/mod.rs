//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library for the quantity it is checking.

#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use ringpir::attack::{block_parity_check, delete_block, split_query};
use ringpir::chain::ChainCode;
use ringpir::cyclic::{hensel_lift_dense, hensel_lift_poly, is_free_cyclic, is_hensel_lift_code, CyclicCode};
use ringpir::pir::fixture::repairable_suite;
use ringpir::pir::{query_gen, QueryOptions, SchemeParams};
use ringpir::ring::{PrimePower, ResidueMatrix, RingPoly};
use ringpir::zm::NfConvention;

pub const RINGS: [(u64, u32); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

pub fn ring_of(i: usize) -> PrimePower {
    let (p, e) = RINGS[i % RINGS.len()];
    PrimePower::new(p, e)
}

/// Every codeword, by closing `{0}` under adding multiples of each row.
pub fn enumerate_span(g: &ResidueMatrix) -> HashSet<Vec<u64>> {
    let q = g.modulus();
    let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; g.cols()]]);
    for r in 0..g.rows() {
        let row = g.row(r);
        let mut next = HashSet::with_capacity(span.len() * q as usize);
        for w in &span {
            for c in 0..q {
                next.insert(w.iter().zip(row).map(|(&a, &b)| (a + c * b) % q).collect::<Vec<u64>>());
            }
        }
        span = next;
    }
    span
}

/// All of `Z_q^n` in lexicographic order.
pub fn all_vectors(q: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = q.pow(n as u32);
    (0..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = k % q;
                k /= q;
                d
            })
            .collect()
    })
}

/// A random generator small enough to enumerate.
pub fn random_generator<R: Rng>(rng: &mut R, ring: PrimePower) -> ResidueMatrix {
    let q = ring.modulus();
    let n = rng.gen_range(1..=6);
    let max_rows = if q >= 27 { 2 } else { 3 };
    let rows = rng.gen_range(1..=max_rows);
    let data = (0..rows * n)
        .map(|_| {
            // skew towards non-units so that non-free codes show up
            let x = rng.gen_range(0..q);
            if rng.gen_bool(0.4) {
                x * ring.p % q
            } else {
                x
            }
        })
        .collect();
    ResidueMatrix::from_vec(rows, n, q, data).unwrap()
}

fn p_adic_valuation(x: u64, ring: PrimePower) -> u32 {
    if x == 0 {
        return ring.e;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(ring.p) {
        y /= ring.p;
        v += 1;
    }
    v
}

/// `|C| = p^k`: recovers `k` from the enumerated size.
fn log_p(mut size: usize, p: u64) -> Option<usize> {
    let mut k = 0;
    while size > 1 {
        if !size.is_multiple_of(p as usize) {
            return None;
        }
        size /= p as usize;
        k += 1;
    }
    Some(k)
}

/// Checks a linear code against enumeration.
pub fn check_linear_code(g: &ResidueMatrix, ring: PrimePower) -> Result<(), String> {
    let q = ring.modulus();
    let n = g.cols();
    let code = ChainCode::from_generator(g, ring).map_err(|e| e.to_string())?;
    let span = enumerate_span(g);

    let k = log_p(span.len(), ring.p).ok_or("span size is not a power of p")?;
    if k != code.zp_dimension() {
        return Err(format!("|C| = p^{k} but subtype gives p^{}", code.zp_dimension()));
    }
    if code.cardinality() != Some(span.len() as u64) {
        return Err("cardinality disagrees with enumeration".into());
    }

    let h = code.parity_check();
    if h.rows() != n - code.subtype().counts()[0] {
        return Err("parity check has the wrong number of rows".into());
    }
    if !g.mul(&h.transpose()).unwrap().is_zero() {
        return Err("G H^T != 0".into());
    }

    // the dual subtype reversed through valuations
    let counts = code.subtype().counts();
    let mut expected = vec![n - counts.iter().sum::<usize>()];
    expected.extend(counts[1..].iter().rev());
    let dual = code.dual();
    if dual.subtype().counts() != expected.as_slice() {
        return Err(format!("dual subtype {:?}, expected {expected:?}", dual.subtype().counts()));
    }
    if !dual.dual().row_span_equal(&code) {
        return Err("double dual differs".into());
    }

    // kernel exactness and membership over the whole space when small
    if q.pow(n as u32) <= 4096 {
        for v in all_vectors(q, n) {
            let in_span = span.contains(&v);
            let killed = h.apply_transpose(&v).iter().all(|&x| x == 0);
            if in_span != killed {
                return Err(format!("{v:?}: in span {in_span}, H v = 0 {killed}"));
            }
            if code.contains(&v) != in_span {
                return Err(format!("contains({v:?}) disagrees with enumeration"));
            }
        }
        // the rows of H span everything orthogonal to C
        let h_span = enumerate_span(&h);
        for v in all_vectors(q, n) {
            let orthogonal = g.apply_transpose(&v).iter().all(|&x| x == 0);
            if h_span.contains(&v) != orthogonal {
                return Err(format!("{v:?}: in span(H) {}, orthogonal {orthogonal}", !orthogonal));
            }
        }
    } else {
        for v in span.iter().take(200) {
            if !code.contains(v) {
                return Err(format!("codeword {v:?} rejected"));
            }
        }
    }

    // the standard form spans the same code, with the claimed valuations
    let sf = code.generator();
    if enumerate_span(&sf) != span {
        return Err("standard form spans a different code".into());
    }
    for (r, &v) in code.valuations().iter().enumerate() {
        let min = sf.row(r).iter().map(|&x| p_adic_valuation(x, ring)).min().unwrap_or(ring.e);
        if min != v {
            return Err(format!("row {r} has valuation {min}, recorded {v}"));
        }
    }

    // idempotence
    let again = ChainCode::from_generator(&sf, ring).map_err(|e| e.to_string())?;
    if again.subtype() != code.subtype() || !again.row_span_equal(&code) {
        return Err("standard form is not idempotent".into());
    }
    Ok(())
}

/// `a mod b` for monic `b` over `Z_q`, both ascending.
pub fn rem_monic(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|x| x % q).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + q - lead * c % q) % q;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

pub fn x_n_minus_1(n: usize, q: u64) -> Vec<u64> {
    let mut v = vec![0; n + 1];
    v[0] = q - 1;
    v[n] = 1;
    v
}

/// Monic divisors of `x^n - 1` over `F_p`, by trying every monic
/// polynomial of degree at most `n`.
pub fn monic_divisors(n: usize, p: u64) -> Vec<Vec<u64>> {
    let target = x_n_minus_1(n, p);
    let mut out = Vec::new();
    for deg in 0..=n {
        for low in all_vectors(p, deg) {
            let mut f = low;
            f.push(1);
            if rem_monic(&target, &f, p).is_empty() {
                out.push(f);
            }
        }
    }
    out
}

/// Every monic lift of `f` to `Z_{p^e}` that divides `x^n - 1`, found by
/// exhaustive search. `None` when there are too many candidates.
pub fn lifts_by_search(f: &[u64], n: usize, ring: PrimePower, cap: u64) -> Option<Vec<Vec<u64>>> {
    let deg = f.len() - 1;
    let fiber = ring.pow(ring.e - 1);
    if fiber.checked_pow(deg as u32)? > cap {
        return None;
    }
    let q = ring.modulus();
    let target = x_n_minus_1(n, q);
    let mut found = Vec::new();
    for offsets in all_vectors(fiber, deg) {
        let mut g: Vec<u64> = f[..deg].iter().zip(&offsets).map(|(&c, &o)| (c + ring.p * o) % q).collect();
        g.push(1);
        if rem_monic(&target, &g, q).is_empty() {
            found.push(g);
        }
    }
    Some(found)
}

pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Exactly one lift exists and it is the one the library computes.
pub fn check_hensel_uniqueness(f: &[u64], n: usize, ring: PrimePower) -> Result<bool, String> {
    let Some(found) = lifts_by_search(f, n, ring, 60_000) else { return Ok(false) };
    if found.len() != 1 {
        return Err(format!("{} lifts of {f:?} for n = {n} over Z_{}", found.len(), ring.modulus()));
    }
    let lib = hensel_lift_dense(f, n, ring).map_err(|e| e.to_string())?;
    if trim(lib.clone()) != trim(found[0].clone()) {
        return Err(format!("library lift {lib:?}, search found {:?}", found[0]));
    }
    Ok(true)
}

/// Lengths up to 6 coprime to `p`.
pub fn coprime_lengths(p: u64) -> Vec<usize> {
    (1..=6).filter(|&n| !(n as u64).is_multiple_of(p)).collect()
}

/// Lengths coprime to `p` whose whole space has at most 8192 words, so
/// that ideals can be enumerated.
pub fn small_lengths(ring: PrimePower) -> Vec<usize> {
    coprime_lengths(ring.p)
        .into_iter()
        .filter(|&n| ring.modulus().pow(n as u32) <= 8192)
        .collect()
}

/// A random ideal: a few generators `p^a * lift(f) * u` with random `u`.
pub fn random_ideal_generators<R: Rng>(rng: &mut R, ring: PrimePower, n: usize) -> Vec<RingPoly> {
    let q = ring.modulus();
    let divisors = monic_divisors(n, ring.p);
    let count = rng.gen_range(1..=2);
    (0..count)
        .map(|_| {
            let f = &divisors[rng.gen_range(0..divisors.len())];
            let lift = hensel_lift_poly(f, n, ring).unwrap();
            let a = rng.gen_range(0..ring.e);
            let u: Vec<i64> = (0..n).map(|_| rng.gen_range(0..q) as i64).collect();
            let u = RingPoly::new(&u, n, q).unwrap();
            let g = lift.scale(ring.pow(a));
            if rng.gen_bool(0.5) {
                g.mul(&u).unwrap()
            } else {
                g
            }
        })
        .collect()
}

/// Freeness, a single generating term with `a = 0`, and being the lift of
/// some divisor (found by trying all of them) must agree.
pub fn check_freeness_equivalence(gens: &[RingPoly], ring: PrimePower) -> Result<(), String> {
    let n = gens[0].n();
    let code = CyclicCode::from_generators(gens, ring).map_err(|e| e.to_string())?;
    let free_linear = code.linear().is_free();
    let free_genset = is_free_cyclic(&code);
    let span = enumerate_span(&code.linear().generator());
    let is_lift = monic_divisors(n, ring.p).iter().any(|f| {
        let lift = hensel_lift_poly(f, n, ring).unwrap();
        let circ = ringpir::cyclic::circulant_expand(&lift);
        enumerate_span(&circ) == span
    });
    if free_linear != free_genset || free_linear != is_lift || is_hensel_lift_code(&code) != is_lift {
        return Err(format!(
            "free (linear) {free_linear}, single term {free_genset}, lift {is_lift} for {gens:?}"
        ));
    }
    for g in gens {
        if !code.contains(g) {
            return Err(format!("generator {g} not in its ideal"));
        }
    }
    Ok(())
}

/// A random repairable instance with small parameters.
pub fn random_protocol_params<R: Rng>(rng: &mut R) -> SchemeParams {
    let m = [36, 72, 108, 216][rng.gen_range(0..4)];
    let s = rng.gen_range(1..=2);
    let r = rng.gen_range(1..=s);
    let t = rng.gen_range(2..=6);
    SchemeParams::new(m, 5, s, r, t, 2).unwrap()
}

/// `H[j] Δ[j] = H[j] (E[j] + U[j])` exactly, and `H[j] A[j] = 0`, at
/// every prime and block.
pub fn check_w_cancellation<R: Rng>(rng: &mut R, params: &SchemeParams, conv: NfConvention) -> Result<(), String> {
    let suite = repairable_suite(params.m(), params.n, params.s).map_err(|e| e.to_string())?;
    let d = rng.gen_range(1..=params.t);
    let opts = QueryOptions { convention: conv, repair: false };
    let (query, secrets) = query_gen(params, &suite, d, opts, rng).map_err(|e| e.to_string())?;
    let noise = secrets.stacked_e(params).add(&secrets.stacked_u(params)).unwrap();
    for f in params.modulus.factors() {
        let q = f.modulus();
        let (a, delta) = split_query(&query.q.reduce(q), params).unwrap();
        let noise = noise.reduce(q);
        for j in 1..=params.t {
            let aj = delete_block(&a, j, params.r).unwrap();
            let h = block_parity_check(&aj, *f, conv);
            if !h.mul(&aj).unwrap().is_zero() {
                return Err(format!("H[{j}] A[{j}] != 0 mod {q}"));
            }
            let lhs = h.mul(&delete_block(&delta, j, params.r).unwrap()).unwrap();
            let rhs = h.mul(&delete_block(&noise, j, params.r).unwrap()).unwrap();
            if lhs != rhs {
                return Err(format!("W survives in block {j} mod {q}"));
            }
        }
    }
    Ok(())
}
