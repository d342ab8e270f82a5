//! Finitely generated cones over ℚ^d and the vector preorders they induce.
//!
//! A cone `C = cone(G)` induces `a ≼ b ⟺ b − a ∈ C`. Its linear part
//! `C ∩ (−C)` carries the symmetric part of that preorder and `C \ (−C)` the
//! strict part.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dd::{self, Generators};
use crate::linalg::{self, dot, negate, IntVec};
use crate::rational::{RationalFunctional, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a cone needs at least one generator")]
    NoGenerators,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("vectors are already comparable")]
    AlreadyComparable,
    #[error("cones are not path-consistent: {0}")]
    Inconsistent(PathWitness),
    #[error("functional is identically zero")]
    ZeroFunctional,
    #[error("subspace basis is empty or linearly dependent")]
    DependentBasis,
    #[error("expected {expected} functional values, found {found}")]
    ValueCountMismatch { expected: usize, found: usize },
}

/// Where a vector sits relative to a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Outside,
    LinearPart,
    StrictPart,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self != Membership::Outside
    }
}

/// Relative position of two vectors under the preorder a cone induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equivalent,
    StrictlyLess,
    StrictlyGreater,
    Incomparable,
}

/// One of the two cones of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn number(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

/// Two-term zero-sum walk: `delta1 ∈ C1`, `delta2 ∈ C2`, `delta1 + delta2 = 0`,
/// and the vector on `strict_side` lies in the strict part of its cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub delta1: RationalVector,
    pub delta2: RationalVector,
    pub strict_side: Side,
}

impl PathWitness {
    /// Checks every claimed property by membership in the given cones.
    pub fn validates(&self, c1: &Cone, c2: &Cone) -> bool {
        let (Ok(m1), Ok(m2)) = (c1.membership(&self.delta1), c2.membership(&self.delta2)) else {
            return false;
        };
        let strict = match self.strict_side {
            Side::First => m1 == Membership::StrictPart,
            Side::Second => m2 == Membership::StrictPart,
        };
        m1.is_member() && m2.is_member() && strict && (&self.delta1 + &self.delta2).is_zero()
    }
}

impl fmt::Display for PathWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {} = 0, strict on side {}",
            self.delta1,
            self.delta2,
            self.strict_side.number()
        )
    }
}

/// Outcome of a path-consistency decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathVerdict {
    witness: Option<PathWitness>,
}

impl PathVerdict {
    pub fn is_consistent(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&PathWitness> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<PathWitness> {
        self.witness
    }
}

#[derive(Debug)]
struct ConeData {
    /// extreme rays of the dual cone; `C ⊆ {x : r · x ≥ 0}`
    facets: Vec<IntVec>,
    /// lineality basis of the dual; `C ⊆ {x : l · x = 0}`
    equalities: Vec<IntVec>,
    /// extreme rays of `C` modulo its linear part
    rays: Vec<IntVec>,
    lineality: Vec<IntVec>,
}

/// `cone(generators)`, the set of nonnegative combinations.
#[derive(Debug)]
pub struct Cone {
    dim: usize,
    generators: Vec<RationalVector>,
    cache: OnceLock<ConeData>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            generators: self.generators.clone(),
            cache: OnceLock::new(),
        }
    }
}

fn check_dim(expected: usize, v: &RationalVector) -> Result<(), ConeError> {
    if v.dim() == expected {
        Ok(())
    } else {
        Err(ConeError::DimensionMismatch {
            expected,
            found: v.dim(),
        })
    }
}

fn rational(v: &[BigInt]) -> RationalVector {
    RationalVector::from_integers(v)
}

impl Cone {
    /// Zero generators are dropped; the result may be the zero cone.
    pub fn new(dim: usize, generators: Vec<RationalVector>) -> Result<Self, ConeError> {
        if dim == 0 {
            return Err(ConeError::ZeroDimension);
        }
        if generators.is_empty() {
            return Err(ConeError::NoGenerators);
        }
        for g in &generators {
            check_dim(dim, g)?;
        }
        Ok(Self::from_parts(
            dim,
            generators.into_iter().filter(|g| !g.is_zero()).collect(),
        ))
    }

    fn from_parts(dim: usize, generators: Vec<RationalVector>) -> Self {
        Self {
            dim,
            generators,
            cache: OnceLock::new(),
        }
    }

    pub fn from_i64s(dim: usize, generators: &[&[i64]]) -> Result<Self, ConeError> {
        Self::new(
            dim,
            generators.iter().map(|g| RationalVector::from_i64s(g)).collect(),
        )
    }

    /// The whole space ℚ^dim.
    pub fn full(dim: usize) -> Self {
        let gens = (0..dim)
            .flat_map(|i| {
                let e = RationalVector::unit(dim, i);
                [-&e, e]
            })
            .collect();
        Self::from_parts(dim, gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generators in input order, zero vectors removed.
    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    fn int_generators(&self) -> Vec<IntVec> {
        self.generators.iter().map(|g| g.primitive_integers()).collect()
    }

    fn data(&self) -> &ConeData {
        self.cache.get_or_init(|| {
            let dual = dd::generators(&self.int_generators(), self.dim);
            let mut rows = dual.rays.clone();
            for l in &dual.lineality {
                rows.push(l.clone());
                rows.push(negate(l));
            }
            let primal = dd::generators(&rows, self.dim);
            ConeData {
                facets: dual.rays,
                equalities: dual.lineality,
                rays: primal.rays,
                lineality: primal.lineality,
            }
        })
    }

    /// Inequalities `f_k(x) ≥ 0` whose common solution set is the cone; each
    /// equality `l(x) = 0` appears as the pair `l`, `−l`.
    pub fn facets(&self) -> Vec<RationalFunctional> {
        let d = self.data();
        let mut out: Vec<RationalFunctional> =
            d.facets.iter().map(|f| rational(f).into()).collect();
        for l in &d.equalities {
            out.push(rational(l).into());
            out.push(rational(&negate(l)).into());
        }
        out
    }

    /// Generators of the dual cone `{y : y · g ≥ 0 for all g ∈ C}` as extreme
    /// rays plus a lineality basis.
    pub fn dual_generators(&self) -> (Vec<RationalVector>, Vec<RationalVector>) {
        let d = self.data();
        (
            d.facets.iter().map(|f| rational(f)).collect(),
            d.equalities.iter().map(|l| rational(l)).collect(),
        )
    }

    /// Extreme rays modulo the linear part, primitive and sorted.
    pub fn extreme_rays(&self) -> Vec<RationalVector> {
        self.data().rays.iter().map(|r| rational(r)).collect()
    }

    /// Basis of `C ∩ (−C)`; empty for pointed cones.
    pub fn linear_part_basis(&self) -> Vec<RationalVector> {
        self.data().lineality.iter().map(|l| rational(l)).collect()
    }

    /// Generators in the strict part, in input order.
    pub fn strict_generators(&self) -> Vec<RationalVector> {
        self.generators
            .iter()
            .filter(|g| self.classify_int(&g.primitive_integers()) == Membership::StrictPart)
            .cloned()
            .collect()
    }

    fn classify_int(&self, v: &[BigInt]) -> Membership {
        let d = self.data();
        if d.equalities.iter().any(|l| !dot(l, v).is_zero()) {
            return Membership::Outside;
        }
        let mut strict = false;
        for f in &d.facets {
            let x = dot(f, v);
            if x.is_negative() {
                return Membership::Outside;
            }
            strict |= x.is_positive();
        }
        if strict {
            Membership::StrictPart
        } else {
            Membership::LinearPart
        }
    }

    pub fn membership(&self, v: &RationalVector) -> Result<Membership, ConeError> {
        check_dim(self.dim, v)?;
        Ok(self.classify_int(&v.primitive_integers()))
    }

    pub fn contains(&self, v: &RationalVector) -> Result<bool, ConeError> {
        Ok(self.membership(v)?.is_member())
    }

    /// Position of `a` relative to `b` under `a ≼ b ⟺ b − a ∈ C`.
    pub fn induced_compare(&self, a: &RationalVector, b: &RationalVector) -> Result<Comparison, ConeError> {
        check_dim(self.dim, a)?;
        check_dim(self.dim, b)?;
        Ok(match self.membership(&(b - a))? {
            Membership::LinearPart => Comparison::Equivalent,
            Membership::StrictPart => Comparison::StrictlyLess,
            Membership::Outside if self.contains(&(a - b))? => Comparison::StrictlyGreater,
            Membership::Outside => Comparison::Incomparable,
        })
    }

    /// Mutual containment of generator sets.
    pub fn same_set(&self, other: &Cone) -> bool {
        self.dim == other.dim
            && self.generators.iter().all(|g| other.contains(g).unwrap_or(false))
            && other.generators.iter().all(|g| self.contains(g).unwrap_or(false))
    }

    pub fn is_pointed(&self) -> bool {
        self.data().lineality.is_empty()
    }

    /// `C ∪ (−C)` is the whole space: either `C` is everything, or its linear
    /// part is a hyperplane and `C` is one of its closed halfspaces.
    pub fn is_total(&self) -> bool {
        let d = self.data();
        match self.dim - d.lineality.len() {
            0 => true,
            1 => !d.rays.is_empty(),
            _ => false,
        }
    }
}

/// Cone generated by both generator lists; it induces the preorder generated
/// by the two induced preorders.
pub fn sum_cone(c1: &Cone, c2: &Cone) -> Result<Cone, ConeError> {
    if c1.dim != c2.dim {
        return Err(ConeError::DimensionMismatch {
            expected: c1.dim,
            found: c2.dim,
        });
    }
    let mut gens = c1.generators.clone();
    gens.extend(c2.generators.iter().cloned());
    Ok(Cone::from_parts(c1.dim, gens))
}

/// `C + ray(v)` for a direction `v` with neither `v` nor `−v` in `C`.
pub fn add_ray(c: &Cone, v: &RationalVector) -> Result<Cone, ConeError> {
    check_dim(c.dim, v)?;
    if c.contains(v)? || c.contains(&-v)? {
        return Err(ConeError::AlreadyComparable);
    }
    let mut gens = c.generators.clone();
    gens.push(v.clone());
    Ok(Cone::from_parts(c.dim, gens))
}

/// Generators of `{x : rows · x ≥ 0}` with the lineality listed in both signs.
fn all_generators(g: &Generators) -> Vec<IntVec> {
    let mut out = g.rays.clone();
    for l in &g.lineality {
        out.push(l.clone());
        out.push(negate(l));
    }
    out
}

/// Constraint rows describing the cone; `negated` describes `−C` instead.
fn constraint_rows(c: &Cone, negated: bool) -> Vec<IntVec> {
    let d = c.data();
    let mut rows: Vec<IntVec> = d
        .facets
        .iter()
        .map(|f| if negated { negate(f) } else { f.clone() })
        .collect();
    for l in &d.equalities {
        rows.push(l.clone());
        rows.push(negate(l));
    }
    rows
}

/// Decides whether a zero-sum walk with steps in `C1 ∪ C2` and a strict step
/// exists.
///
/// Such a walk exists iff `D = C1 ∩ (−C2)` has a generator `g` with
/// `g ∉ −C1` or `g ∉ C2`; then `(g, −g)` is a two-term witness.
pub fn path_consistent(c1: &Cone, c2: &Cone) -> Result<PathVerdict, ConeError> {
    if c1.dim != c2.dim {
        return Err(ConeError::DimensionMismatch {
            expected: c1.dim,
            found: c2.dim,
        });
    }
    let mut rows = constraint_rows(c1, false);
    rows.extend(constraint_rows(c2, true));
    let d = dd::generators(&rows, c1.dim);
    for g in all_generators(&d) {
        let neg = negate(&g);
        let in_neg_c1 = c1.classify_int(&neg).is_member();
        let in_c2 = c2.classify_int(&g).is_member();
        if in_neg_c1 && in_c2 {
            continue;
        }
        let strict_side = if in_neg_c1 { Side::Second } else { Side::First };
        return Ok(PathVerdict {
            witness: Some(PathWitness {
                delta1: rational(&g),
                delta2: rational(&neg),
                strict_side,
            }),
        });
    }
    Ok(PathVerdict { witness: None })
}

/// Functional `f` with `{f ≥ 0}` a total cone consistently extending `c`:
/// zero on the linear part and positive on the strict part.
///
/// `f` is the sum of the dual extreme rays, an interior point of the dual
/// modulo its lineality. It is zero iff `c` is a linear subspace.
pub fn halfspace_completion(c: &Cone) -> RationalFunctional {
    let sum = c.data().facets.iter().fold(vec![BigInt::zero(); c.dim], |mut acc, f| {
        for (a, x) in acc.iter_mut().zip(f) {
            *a += x;
        }
        acc
    });
    rational(&sum).into()
}

/// Completion functional for a path-consistent pair, taken from their sum cone.
pub fn common_cone_completion(c1: &Cone, c2: &Cone) -> Result<RationalFunctional, ConeError> {
    if let Some(w) = path_consistent(c1, c2)?.into_witness() {
        return Err(ConeError::Inconsistent(w));
    }
    let f = halfspace_completion(&sum_cone(c1, c2)?);
    debug_assert!(verify_common_completion(c1, c2, &f));
    Ok(f)
}

/// Checks that `f` vanishes on both linear parts and is positive on every
/// strict generator of either cone and on every pairwise sum of them.
pub fn verify_common_completion(c1: &Cone, c2: &Cone, f: &RationalFunctional) -> bool {
    if f.dim() != c1.dim || f.dim() != c2.dim {
        return false;
    }
    let zero_on_linear = c1
        .linear_part_basis()
        .iter()
        .chain(&c2.linear_part_basis())
        .all(|l| f.eval(l).is_zero());
    let mut strict = c1.strict_generators();
    strict.extend(c2.strict_generators());
    let positive = strict.iter().all(|g| f.eval(g).is_positive())
        && strict
            .iter()
            .enumerate()
            .all(|(i, a)| strict[i + 1..].iter().all(|b| f.eval(&(a + b)).is_positive()));
    zero_on_linear && positive
}

/// Result of comparing a cone with the preorder `x ≼ y ⟺ f(y − x) ≥ 0` of a
/// functional defined on a subspace `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalCheck {
    /// Side 1 is the functional's cone, side 2 the input cone.
    pub verdict: PathVerdict,
    /// `f ≥ 0` on every generator of `V ∩ C`.
    pub nonnegative_on_cone: bool,
    /// `f = 0` on a basis of `V ∩ C^L`.
    pub zero_on_linear_part: bool,
    /// `f > 0` on every generator of `V ∩ C` in the strict part of `C`.
    pub positive_on_strict_part: bool,
}

impl FunctionalCheck {
    pub fn holds(&self) -> bool {
        self.verdict.is_consistent()
            && self.nonnegative_on_cone
            && self.zero_on_linear_part
            && self.positive_on_strict_part
    }
}

/// Compares `c` with the cone `{x ∈ V : f(x) ≥ 0}`, where `f` is given by its
/// values on a basis of `V`.
pub fn functional_consistency_check(
    c: &Cone,
    basis: &[RationalVector],
    values: &[BigRational],
) -> Result<FunctionalCheck, ConeError> {
    let dim = c.dim;
    for b in basis {
        check_dim(dim, b)?;
    }
    if values.len() != basis.len() {
        return Err(ConeError::ValueCountMismatch {
            expected: basis.len(),
            found: values.len(),
        });
    }
    let basis_int: Vec<IntVec> = basis.iter().map(|b| b.primitive_integers()).collect();
    if basis.is_empty() || linalg::rank(&basis_int, dim) != basis.len() {
        return Err(ConeError::DependentBasis);
    }
    let Some(pivot) = values.iter().position(|v| !v.is_zero()) else {
        return Err(ConeError::ZeroFunctional);
    };

    // kernel of f inside V, in both signs, plus one vector where f is positive
    let value_row = vec![linalg::to_integer_row(values)];
    let mut gens = Vec::new();
    for lambda in linalg::nullspace(&value_row, basis.len()) {
        let v = combination(basis, &lambda);
        gens.push(-&v);
        gens.push(v);
    }
    let up = if values[pivot].is_positive() {
        basis[pivot].clone()
    } else {
        -&basis[pivot]
    };
    gens.push(up);
    let cf = Cone::from_parts(dim, gens);
    let verdict = path_consistent(&cf, c)?;

    let eval = |x: &[BigInt]| -> BigRational {
        let rat: Vec<Vec<BigRational>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        let lambda = linalg::solve_combination(&rat, &linalg::to_rational_row(x))
            .expect("vector lies in the subspace");
        lambda
            .iter()
            .zip(values)
            .fold(BigRational::zero(), |acc, (l, v)| acc + l * v)
    };

    // equations cutting out V
    let complement = linalg::nullspace(&basis_int, dim);
    let mut v_rows = Vec::new();
    for n in &complement {
        v_rows.push(n.clone());
        v_rows.push(negate(n));
    }

    let mut rows = constraint_rows(c, false);
    rows.extend(v_rows.iter().cloned());
    let v_cap_c = all_generators(&dd::generators(&rows, dim));
    let nonnegative_on_cone = v_cap_c.iter().all(|g| !eval(g).is_negative());
    let positive_on_strict_part = v_cap_c
        .iter()
        .filter(|g| c.classify_int(g) == Membership::StrictPart)
        .all(|g| eval(g).is_positive());

    // x ∈ C^L iff x is orthogonal to the complement of the lineality span
    let mut rows = v_rows;
    for n in linalg::nullspace(&c.data().lineality, dim) {
        rows.push(negate(&n));
        rows.push(n);
    }
    let v_cap_lin = dd::generators(&rows, dim);
    let zero_on_linear_part = v_cap_lin.lineality.iter().all(|g| eval(g).is_zero());

    Ok(FunctionalCheck {
        verdict,
        nonnegative_on_cone,
        zero_on_linear_part,
        positive_on_strict_part,
    })
}

fn combination(basis: &[RationalVector], lambda: &[BigInt]) -> RationalVector {
    basis
        .iter()
        .zip(lambda)
        .fold(RationalVector::zero(basis[0].dim()), |acc, (b, l)| {
            &acc + &b.scale(&BigRational::from_integer(l.clone()))
        })
}
