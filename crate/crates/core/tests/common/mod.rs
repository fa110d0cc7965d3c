#![allow(dead_code)]

use chow_core::chern::Bundle;
use chow_core::polyring::{Poly, Ring, VarTable};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ring(spec: &[(&str, u32)], bound: u32) -> Ring {
    VarTable::new(spec.iter().map(|(n, d)| (n.to_string(), *d)), bound).unwrap()
}

/// `c1..c4, b1, b2` at the given bound.
pub fn cb_ring(bound: u32) -> Ring {
    ring(
        &[("c1", 1), ("c2", 2), ("c3", 3), ("c4", 4), ("b1", 1), ("b2", 2)],
        bound,
    )
}

pub fn random_homogeneous(ring: &Ring, d: u32, terms: usize, rng: &mut ChaCha8Rng) -> Poly {
    let monomials = ring.monomials(d);
    let mut p = Poly::zero(ring);
    for m in monomials.choose_multiple(rng, terms) {
        let c: i64 = rng.gen_range(-9..=9);
        p = &p + &Poly::from_terms(ring, [(m.clone(), BigInt::from(c))]);
    }
    p
}

pub fn random_poly(ring: &Ring, max_degree: u32, rng: &mut ChaCha8Rng) -> Poly {
    let mut p = Poly::zero(ring);
    for d in 0..=max_degree {
        let n = rng.gen_range(0..=3);
        p = &p + &random_homogeneous(ring, d, n, rng);
    }
    p
}

/// A bundle whose i-th class is a random homogeneous class of degree i.
pub fn random_bundle(ring: &Ring, rank: usize, rng: &mut ChaCha8Rng) -> Bundle {
    let mut classes = vec![Poly::one(ring)];
    for i in 1..=rank {
        classes.push(random_homogeneous(ring, i as u32, 3, rng));
    }
    Bundle::new(rank, classes).unwrap()
}
