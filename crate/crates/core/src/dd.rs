//! Double description: generators of `{y : a · y ≥ 0 for every row a}`.
//!
//! The cone is returned as `cone(rays) + span(lineality)` with rays extreme
//! modulo the lineality space, both in primitive integer form.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{dot, is_zero, primitive, span_basis, IntVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Generators {
    pub rays: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
}

/// Zero set of a ray over the constraints processed so far.
#[derive(Clone)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(words: usize) -> Self {
        Self(vec![0; words])
    }

    fn insert(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn contains_all(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| b & !a == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: IntVec,
    zeros: ZeroSet,
}

/// Normalizes rows to primitive form, drops zero rows, deduplicates and sorts.
pub(crate) fn canonical_rows(rows: &[IntVec]) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = rows
        .iter()
        .filter(|r| !is_zero(r))
        .map(|r| primitive(r.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Generators of the polyhedral cone `{y ∈ ℚ^dim : a · y ≥ 0}`.
pub(crate) fn generators(rows: &[IntVec], dim: usize) -> Generators {
    let rows = canonical_rows(rows);
    let words = rows.len().div_ceil(64).max(1);

    let mut lineality: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        if let Some(p) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(p);
            let mut s = dot(a, &l0);
            if s.is_negative() {
                l0 = l0.iter().map(|c| -c).collect();
                s = -s;
            }
            for l in &mut lineality {
                let t = dot(a, l);
                if !t.is_zero() {
                    *l = primitive(combine(&s, l, &t, &l0));
                }
            }
            for r in &mut rays {
                let t = dot(a, &r.v);
                if !t.is_zero() {
                    r.v = primitive(combine(&s, &r.v, &t, &l0));
                }
                r.zeros.insert(k);
            }
            // tight on every earlier constraint, not on this one
            let mut zeros = ZeroSet::new(words);
            for j in 0..k {
                zeros.insert(j);
            }
            rays.push(Ray { v: l0, zeros });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }

        // rank bound: adjacent rays share at least d - lin - 2 tight constraints
        let min_common = dim.saturating_sub(lineality.len() + 2);
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersect(&rays[n].zeros);
                if common.count() < min_common {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|o| o == p || o == n || !rays[o].zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                // (a·p) n − (a·n) p is tight on the new constraint
                let v = primitive(combine(&values[p], &rays[n].v, &values[n], &rays[p].v));
                let mut zeros = common;
                zeros.insert(k);
                created.push(Ray { v, zeros });
            }
        }

        let mut kept = Vec::with_capacity(rays.len() - neg.len() + created.len());
        for (mut r, v) in rays.into_iter().zip(&values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(k);
            }
            kept.push(r);
        }
        kept.extend(created);
        rays = kept;
    }

    let mut rays: Vec<IntVec> = rays.into_iter().map(|r| r.v).collect();
    rays.sort();
    rays.dedup();
    Generators {
        rays,
        lineality: span_basis(&lineality, dim),
    }
}

/// `s·x − t·y`
fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> IntVec {
    x.iter().zip(y).map(|(xi, yi)| s * xi - t * yi).collect()
}
