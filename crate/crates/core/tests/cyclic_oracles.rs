mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringpir::cyclic::{circulant_expand, hensel_lift_dense, nf_cyclic, CyclicCode};
use ringpir::error::Error;
use ringpir::ring::{PrimePower, RingPoly};

use common::*;

#[test]
fn every_hensel_lift_is_the_unique_one() {
    for (p, e) in RINGS {
        let ring = PrimePower::new(p, e);
        for n in coprime_lengths(p) {
            for f in monic_divisors(n, p) {
                assert!(check_hensel_uniqueness(&f, n, ring).unwrap(), "{f:?} skipped");
            }
        }
    }
}

#[test]
fn lifting_rejects_non_divisors() {
    let ring = PrimePower::new(2, 2);
    // x^2 + x + 1 does not divide x^5 - 1 over F_2
    assert_eq!(hensel_lift_dense(&[1, 1, 1], 5, ring), Err(Error::NotADivisor));
    let z9 = PrimePower::new(3, 2);
    assert!(matches!(hensel_lift_dense(&[1, 2], 4, z9), Err(Error::InvalidParams(_))));
}

fn shift(w: &[u64]) -> Vec<u64> {
    let n = w.len();
    (0..n).map(|k| w[(k + n - 1) % n]).collect()
}

/// The ideal generated by the rows of `words`, by enumeration.
fn ideal_closure(words: &[Vec<u64>], n: usize, q: u64) -> HashSet<Vec<u64>> {
    let mut rows = Vec::new();
    for w in words {
        let mut s = w.clone();
        for _ in 0..n {
            rows.push(s.clone());
            s = shift(&s);
        }
    }
    if rows.is_empty() {
        return HashSet::from([vec![0; n]]);
    }
    let flat: Vec<u64> = rows.concat();
    enumerate_span(&ringpir::ring::ResidueMatrix::from_vec(rows.len(), n, q, flat).unwrap())
}

fn random_case(seed: u64) -> (PrimePower, Vec<RingPoly>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = ring_of(seed as usize);
    let lengths = small_lengths(ring);
    let n = lengths[(seed / 4) as usize % lengths.len()];
    (ring, random_ideal_generators(&mut rng, ring, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn freeness_three_ways(seed in any::<u64>()) {
        let (ring, gens) = random_case(seed);
        if let Err(e) = check_freeness_equivalence(&gens, ring) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn ideals_are_shift_closed_and_principal(seed in any::<u64>()) {
        let (ring, gens) = random_case(seed);
        let n = gens[0].n();
        let q = ring.modulus();
        let code = CyclicCode::from_generators(&gens, ring).unwrap();
        let words: Vec<Vec<u64>> = gens.iter().map(|g| g.coeffs().to_vec()).collect();
        let span = ideal_closure(&words, n, q);
        prop_assert_eq!(enumerate_span(&code.linear().generator()), span.clone());
        for w in &span {
            prop_assert!(span.contains(&shift(w)));
        }
        // the generating set and the single generator polynomial give the same ideal
        let terms: Vec<Vec<u64>> = code.genset().elements().iter().map(|g| g.coeffs().to_vec()).collect();
        prop_assert_eq!(&ideal_closure(&terms, n, q), &span);
        let g = code.generator_polynomial();
        prop_assert_eq!(&enumerate_span(&circulant_expand(&g)), &span);
        prop_assert!(code.genset().check().is_ok());
    }

    #[test]
    fn cyclic_non_free_part_is_the_ideal_of_the_linear_one(seed in any::<u64>()) {
        let (ring, gens) = random_case(seed);
        let n = gens[0].n();
        let q = ring.modulus();
        let code = CyclicCode::from_generators(&gens, ring).unwrap();
        let linear_nf = code.linear().non_free_part();
        let words = linear_nf.generator().row_vectors();
        let closure = ideal_closure(&words, n, q);
        let cyclic_nf = nf_cyclic(code.genset()).unwrap();
        let cyclic_span = enumerate_span(&cyclic_nf.linear().generator());
        prop_assert_eq!(cyclic_span, closure);
    }
}

#[test]
fn linear_and_cyclic_non_free_parts_differ() {
    // <x + 1> over Z_4, n = 5: the linear non-free part is a single word
    // up to scaling while the cyclic one is all of 2R.
    let ring = PrimePower::new(2, 2);
    let code = CyclicCode::from_generators(&[RingPoly::new(&[1, 1], 5, 4).unwrap()], ring).unwrap();
    assert_eq!(code.linear().non_free_part().cardinality(), Some(2));
    assert_eq!(code.non_free_part().unwrap().linear().cardinality(), Some(32));
}
