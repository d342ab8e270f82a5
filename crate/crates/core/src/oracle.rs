//! Brute-force reference implementations for cross-checking the main
//! algorithms. They follow the definitions literally, share no code with the
//! decision procedures, and refuse inputs beyond small hard limits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cone::{Cone, Side};
use crate::consistency::{Chain, ConsistencyVerdict, LinkTag};
use crate::rational::RationalVector;
use crate::relation::Relation;

pub const MAX_CHAIN_UNIVERSE: usize = 8;
pub const MAX_COMPLETION_UNIVERSE: usize = 4;
pub const MAX_WITNESS_DIM: usize = 3;
pub const MAX_WITNESS_TERMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("universe of {found} elements exceeds the oracle limit of {limit}")]
    UniverseTooLarge { limit: usize, found: usize },
}

fn limit(found: usize, limit: usize) -> Result<(), OracleError> {
    if found > limit {
        Err(OracleError::UniverseTooLarge { limit, found })
    } else {
        Ok(())
    }
}

fn strict_in(r: &Relation, a: usize, b: usize) -> bool {
    r.contains(a, b) && !r.contains(b, a)
}

/// Searches every simple circular chain over `r1 ∪ r2` for one with a strict
/// link. Each cycle is enumerated once, from its smallest vertex.
pub fn oracle_chain_consistent(r1: &Relation, r2: &Relation) -> Result<ConsistencyVerdict, OracleError> {
    let n = r1.size();
    limit(n, MAX_CHAIN_UNIVERSE)?;
    let linked = |a: usize, b: usize| r1.contains(a, b) || r2.contains(a, b);
    let strict = |a: usize, b: usize| strict_in(r1, a, b) || strict_in(r2, a, b);

    fn dfs(
        start: usize,
        path: &mut Vec<usize>,
        has_strict: bool,
        n: usize,
        linked: &dyn Fn(usize, usize) -> bool,
        strict: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let last = *path.last().unwrap();
        if linked(last, start) && (has_strict || strict(last, start)) {
            path.push(start);
            return true;
        }
        for next in start + 1..n {
            if path.contains(&next) || !linked(last, next) {
                continue;
            }
            path.push(next);
            if dfs(start, path, has_strict || strict(last, next), n, linked, strict) {
                return true;
            }
            path.pop();
        }
        false
    }

    for start in 0..n {
        let mut path = vec![start];
        if dfs(start, &mut path, false, n, &linked, &strict) {
            let universe = r1.universe();
            let tags = path
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0], w[1]);
                    if strict_in(r1, a, b) {
                        LinkTag::Strict1
                    } else if strict_in(r2, a, b) {
                        LinkTag::Strict2
                    } else if r1.contains(a, b) {
                        LinkTag::Sym1
                    } else {
                        LinkTag::Sym2
                    }
                })
                .collect();
            let nodes = path.iter().map(|&i| universe.id(i).to_owned()).collect();
            let chain = Chain::new(nodes, tags).expect("closed walk has a link");
            return Ok(ConsistencyVerdict::inconsistent(chain));
        }
    }
    Ok(ConsistencyVerdict::consistent())
}

/// Every total preorder on `n` elements, as a rank per element with the used
/// ranks forming `0..k`.
pub fn total_preorder_ranks(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rank = vec![0; n];
    loop {
        let max = rank.iter().copied().max().unwrap_or(0);
        if n == 0 || (0..=max).all(|k| rank.contains(&k)) {
            out.push(rank.clone());
        }
        // odometer over {0..n-1}^n
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            rank[i] += 1;
            if rank[i] < n {
                break;
            }
            rank[i] = 0;
            i += 1;
        }
    }
}

/// `t` consistently extends `r`, checked pair by pair.
fn extends(t: &[Vec<bool>], r: &Relation) -> bool {
    let n = r.size();
    (0..n).all(|a| {
        (0..n).all(|b| {
            !r.contains(a, b) || (t[a][b] && (t[b][a] == r.contains(b, a)))
        })
    })
}

/// All total preorders consistently extending both relations.
pub fn oracle_enumerate_completions(r1: &Relation, r2: &Relation) -> Result<Vec<Relation>, OracleError> {
    let n = r1.size();
    limit(n, MAX_COMPLETION_UNIVERSE)?;
    let mut out = Vec::new();
    for rank in total_preorder_ranks(n) {
        let t: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| rank[a] <= rank[b]).collect())
            .collect();
        if extends(&t, r1) && extends(&t, r2) {
            let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
            let pairs: Vec<(usize, usize)> = pairs.filter(|&(a, b)| t[a][b]).collect();
            out.push(
                Relation::from_index_pairs(r1.universe().clone(), pairs)
                    .expect("indices are in range"),
            );
        }
    }
    Ok(out)
}

/// One step `δ` of a zero-sum walk, drawn from the cone on `side`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTerm {
    pub side: Side,
    pub vector: RationalVector,
}

/// Gaussian elimination solving `Σ λ_j cols[j] = target` for linearly
/// independent columns; `None` if inconsistent or dependent.
fn solve_independent(cols: &[&RationalVector], target: &RationalVector) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let d = target.dim();
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c.coords()[i].clone()).collect();
            row.push(target.coords()[i].clone());
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..k {
        let p = (row..d).find(|&i| !m[i][col].is_zero())?;
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(m[..k].iter().map(|r| r[k].clone()).collect())
}

/// Membership in `cone(gens)` by Carathéodory: some linearly independent
/// subset of generators represents `v` with nonnegative coefficients.
fn caratheodory_member(gens: &[RationalVector], v: &RationalVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let n = gens.len();
    (1u32..1 << n).any(|mask| {
        let cols: Vec<&RationalVector> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &gens[i]).collect();
        cols.len() <= v.dim()
            && solve_independent(&cols, v).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
    })
}

fn strict_member(gens: &[RationalVector], v: &RationalVector) -> bool {
    caratheodory_member(gens, v) && !caratheodory_member(gens, &-v)
}

/// Bounded search for a zero-sum sequence of at most `max_terms` steps, each
/// a generator of `c1` or `c2` scaled by 1, 2 or 3, with at least one step in
/// the strict part of its cone. Finding one disproves path consistency; not
/// finding one proves nothing.
///
/// # Panics
/// If the dimension exceeds [`MAX_WITNESS_DIM`] or `max_terms` exceeds
/// [`MAX_WITNESS_TERMS`].
pub fn oracle_path_witness_search(c1: &Cone, c2: &Cone, max_terms: usize) -> Option<Vec<OracleTerm>> {
    assert!(c1.dim() <= MAX_WITNESS_DIM && c2.dim() == c1.dim());
    assert!(max_terms <= MAX_WITNESS_TERMS);
    let g1 = c1.generators();
    let g2 = c2.generators();

    // candidate steps: (side, vector, strict)
    let mut steps = Vec::new();
    for (side, gens) in [(Side::First, g1), (Side::Second, g2)] {
        for g in gens {
            let strict = strict_member(gens, g);
            for k in 1..=3 {
                steps.push((side, g.scale(&BigRational::from_integer(BigInt::from(k))), strict));
            }
        }
    }

    // nondecreasing index tuples enumerate multisets
    fn search(
        steps: &[(Side, RationalVector, bool)],
        from: usize,
        left: usize,
        sum: &RationalVector,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if !chosen.is_empty() && sum.is_zero() && chosen.iter().any(|&i| steps[i].2) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in from..steps.len() {
            chosen.push(i);
            if search(steps, i, left - 1, &(sum + &steps[i].1), chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    for terms in 1..=max_terms {
        if search(&steps, 0, terms, &RationalVector::zero(c1.dim()), &mut chosen) {
            return Some(
                chosen
                    .iter()
                    .map(|&i| OracleTerm {
                        side: steps[i].0,
                        vector: steps[i].1.clone(),
                    })
                    .collect(),
            );
        }
    }
    None
}
