//! Input generators shared by the property and acceptance suites.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use relcon::{Cone, RationalVector, Relation, Universe};

pub fn universe(n: usize) -> Arc<Universe> {
    Universe::numbered(n).unwrap()
}

/// Relation whose pair `(i, j)` is bit `i * n + j` of `mask`.
pub fn from_mask(u: &Arc<Universe>, mask: u64) -> Relation {
    let n = u.len();
    let pairs = (0..n * n).filter(|k| mask >> k & 1 == 1).map(|k| (k / n, k % n));
    Relation::from_index_pairs(u.clone(), pairs).unwrap()
}

/// Every non-empty transitive relation on `n ≤ 4` elements.
pub fn all_transitive(u: &Arc<Universe>) -> Vec<Relation> {
    let n = u.len();
    assert!(n <= 4);
    (1u64..1 << (n * n))
        .map(|m| from_mask(u, m))
        .filter(Relation::is_transitive)
        .collect()
}

/// Transitive closure of a random relation with the given pair density.
pub fn random_transitive<R: Rng>(rng: &mut R, u: &Arc<Universe>, density: f64) -> Relation {
    let n = u.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Relation::from_index_pairs(u.clone(), pairs).unwrap().transitive_closure()
}

pub fn random_cone<R: Rng>(rng: &mut R, dim: usize, max_gens: usize) -> Cone {
    let count = rng.gen_range(1..=max_gens);
    let gens = (0..count)
        .map(|_| RationalVector::from_i64s(&(0..dim).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>()))
        .collect();
    Cone::new(dim, gens).unwrap()
}

/// Transitive relation on 1 to `max_n` elements.
pub fn transitive_relation(max_n: usize) -> impl Strategy<Value = Relation> {
    transitive_relation_with_density(max_n, 0.5)
}

/// Closure of a relation whose pairs are each present with probability `p`.
pub fn transitive_relation_with_density(max_n: usize, p: f64) -> impl Strategy<Value = Relation> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(p), n * n).prop_map(move |bits| {
            let u = universe(n);
            let pairs = (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n));
            Relation::from_index_pairs(u, pairs).unwrap().transitive_closure()
        })
    })
}

/// Two transitive relations on one shared universe.
pub fn transitive_pair(max_n: usize) -> impl Strategy<Value = (Relation, Relation)> {
    (1..=max_n).prop_flat_map(|n| {
        let bits = proptest::collection::vec(any::<bool>(), n * n);
        (bits.clone(), bits).prop_map(move |(b1, b2)| {
            let u = universe(n);
            let make = |bits: &[bool]| {
                let pairs = (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n));
                Relation::from_index_pairs(u.clone(), pairs).unwrap().transitive_closure()
            };
            (make(&b1), make(&b2))
        })
    })
}

pub fn int_vector(dim: usize) -> impl Strategy<Value = RationalVector> {
    proptest::collection::vec(-3i64..=3, dim).prop_map(|c| RationalVector::from_i64s(&c))
}

pub fn cone_with_dim(dim: usize) -> impl Strategy<Value = Cone> {
    proptest::collection::vec(int_vector(dim), 1..=6).prop_map(move |g| Cone::new(dim, g).unwrap())
}

/// Cone pair with dimension at most `max_dim` and at most six generators each.
pub fn cone_pair(max_dim: usize) -> impl Strategy<Value = (Cone, Cone)> {
    (1..=max_dim).prop_flat_map(|d| (cone_with_dim(d), cone_with_dim(d)))
}
