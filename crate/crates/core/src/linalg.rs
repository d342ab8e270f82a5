//! Exact linear algebra over integer and rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type IntVec = Vec<BigInt>;

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Divides by the gcd of the entries; zero vectors are returned unchanged.
pub(crate) fn primitive(mut v: IntVec) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

pub(crate) fn is_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub(crate) fn negate(v: &[BigInt]) -> IntVec {
    v.iter().map(|c| -c).collect()
}

/// Primitive integer multiple of a rational vector.
pub(crate) fn to_integer_row(v: &[BigRational]) -> IntVec {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive(
        v.iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect(),
    )
}

pub(crate) fn to_rational_row(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub(crate) fn rref(mut rows: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in &mut rows[r] {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c].clone();
                let (lo, hi) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&mut b[0], &a[r])
                };
                for (x, y) in lo.iter_mut().zip(hi) {
                    *x -= &k * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub(crate) fn rank(rows: &[IntVec], cols: usize) -> usize {
    let rat = rows.iter().map(|r| to_rational_row(r)).collect();
    rref(rat, cols).1.len()
}

/// Basis of `{x : row · x = 0 for every row}`, one primitive vector per free
/// column.
pub(crate) fn nullspace(rows: &[IntVec], cols: usize) -> Vec<IntVec> {
    let rat = rows.iter().map(|r| to_rational_row(r)).collect();
    let (reduced, pivots) = rref(rat, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            to_integer_row(&x)
        })
        .collect()
}

/// Canonical basis of the span: the rows of the reduced echelon form, scaled
/// to primitive integers.
pub(crate) fn span_basis(vectors: &[IntVec], cols: usize) -> Vec<IntVec> {
    let rat = vectors.iter().map(|r| to_rational_row(r)).collect();
    rref(rat, cols)
        .0
        .iter()
        .map(|r| to_integer_row(r))
        .collect()
}

/// Coefficients `λ` with `Σ λ_i vectors[i] = target`, if any.
pub(crate) fn solve_combination(vectors: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = vectors.len();
    let d = target.len();
    // augmented system: one row per coordinate, columns are the vectors then target
    let rows: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut lambda = vec![BigRational::zero(); k];
    for (row, &p) in reduced.iter().zip(&pivots) {
        lambda[p] = row[k].clone();
    }
    Some(lambda)
}
