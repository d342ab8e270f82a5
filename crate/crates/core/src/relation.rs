//! Finite homogeneous binary relations.
//!
//! A [`Relation`] lives on a shared [`Universe`] of named elements and stores
//! its pairs as a dense bit matrix, one row of 64-bit words per source element.
//! Everything here is immutable once built; operations return new relations.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("element index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("duplicate element {0:?} in universe")]
    DuplicateElement(String),
    #[error("universe must contain at least one element")]
    EmptyUniverse,
    #[error("relation must contain at least one pair")]
    EmptyRelation,
    #[error("relations are defined on different universes")]
    UniverseMismatch,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("relation is not symmetric and transitive")]
    NotSymmetricTransitive,
}

/// Ordered set of distinct element identifiers.
#[derive(Clone, PartialEq, Eq)]
pub struct Universe {
    elements: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(ids: I) -> Result<Arc<Self>, RelationError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for id in ids {
            let id = id.into();
            if index.insert(id.clone(), elements.len()).is_some() {
                return Err(RelationError::DuplicateElement(id));
            }
            elements.push(id);
        }
        if elements.is_empty() {
            return Err(RelationError::EmptyUniverse);
        }
        Ok(Arc::new(Self { elements, index }))
    }

    /// Universe `0, 1, .., n-1` with decimal names.
    pub fn numbered(n: usize) -> Result<Arc<Self>, RelationError> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<usize, RelationError> {
        self.index_of(id)
            .ok_or_else(|| RelationError::UnknownElement(id.to_owned()))
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.elements).finish()
    }
}

fn same_universe(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
    Arc::ptr_eq(a, b) || a.elements == b.elements
}

/// Square boolean matrix packed into 64-bit words, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let stride = n.div_ceil(64);
        Self {
            n,
            stride,
            words: vec![0; n * stride],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.words[i * self.stride + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    /// `row[dst] |= row[src]`
    #[inline]
    fn or_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        for w in 0..self.stride {
            let v = self.words[src * self.stride + w];
            self.words[dst * self.stride + w] |= v;
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn transpose(&self) -> Self {
        let mut out = Self::new(self.n);
        for (i, j) in self.ones() {
            out.set(j, i);
        }
        out
    }

    /// Pairs in (row, column) order.
    pub(crate) fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.row(i).iter().enumerate().flat_map(move |(w, &word)| {
                let mut bits = word;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some((i, w * 64 + b))
                })
            })
        })
    }

    /// Warshall's algorithm on packed rows.
    fn close_transitively(&mut self) {
        for k in 0..self.n {
            for i in 0..self.n {
                if self.get(i, k) {
                    self.or_row(i, k);
                }
            }
        }
    }

    fn is_transitive(&self) -> bool {
        // (i, j) present requires row j to be contained in row i
        self.ones().all(|(i, j)| {
            self.row(j)
                .iter()
                .zip(self.row(i))
                .all(|(rj, ri)| rj & !ri == 0)
        })
    }
}

/// A homogeneous binary relation on a finite universe.
///
/// Relations built from user input are never empty; the empty relation only
/// appears as an explicit marker, e.g. the asymmetric part of an equivalence.
#[derive(Clone)]
pub struct Relation {
    universe: Arc<Universe>,
    bits: BitMatrix,
}

/// Axiom flags of a relation plus the classes derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub transitive: bool,
    pub symmetric: bool,
    pub asymmetric: bool,
    pub reflexive: bool,
    pub irreflexive: bool,
    pub antisymmetric: bool,
    pub total: bool,
    pub preorder: bool,
    pub equivalence: bool,
    pub strict_partial_order: bool,
    pub partial_order: bool,
    pub total_preorder: bool,
}

/// Symmetric and asymmetric parts of a relation. Either may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parts {
    pub symmetric: Relation,
    pub asymmetric: Relation,
}

impl Relation {
    /// Builds a relation from element-id pairs, deduplicating repeats.
    pub fn new<S: AsRef<str>>(
        universe: Arc<Universe>,
        pairs: &[(S, S)],
    ) -> Result<Self, RelationError> {
        if pairs.is_empty() {
            return Err(RelationError::EmptyRelation);
        }
        let mut bits = BitMatrix::new(universe.len());
        for (a, b) in pairs {
            let i = universe.resolve(a.as_ref())?;
            let j = universe.resolve(b.as_ref())?;
            bits.set(i, j);
        }
        Ok(Self { universe, bits })
    }

    /// Builds a relation from index pairs. An empty pair list yields the
    /// empty marker relation.
    pub fn from_index_pairs<I>(universe: Arc<Universe>, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = universe.len();
        let mut bits = BitMatrix::new(n);
        for (i, j) in pairs {
            if i >= n {
                return Err(RelationError::IndexOutOfRange(i));
            }
            if j >= n {
                return Err(RelationError::IndexOutOfRange(j));
            }
            bits.set(i, j);
        }
        Ok(Self { universe, bits })
    }

    /// The explicit empty relation.
    pub fn empty(universe: Arc<Universe>) -> Self {
        let bits = BitMatrix::new(universe.len());
        Self { universe, bits }
    }

    /// The identity relation `{(a, a)}`.
    pub fn diagonal(universe: Arc<Universe>) -> Self {
        let mut bits = BitMatrix::new(universe.len());
        for i in 0..universe.len() {
            bits.set(i, i);
        }
        Self { universe, bits }
    }

    pub(crate) fn from_bits(universe: Arc<Universe>, bits: BitMatrix) -> Self {
        debug_assert_eq!(universe.len(), bits.n);
        Self { universe, bits }
    }

    pub(crate) fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn contains_ids(&self, a: &str, b: &str) -> Result<bool, RelationError> {
        Ok(self.contains(self.universe.resolve(a)?, self.universe.resolve(b)?))
    }

    /// Index pairs sorted by (source, target).
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.ones()
    }

    /// Id pairs sorted by (source index, target index).
    pub fn id_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .map(|(i, j)| (self.universe.id(i).to_owned(), self.universe.id(j).to_owned()))
            .collect()
    }

    pub fn same_universe(&self, other: &Self) -> bool {
        same_universe(&self.universe, &other.universe)
    }

    pub(crate) fn check_universe(&self, other: &Self) -> Result<(), RelationError> {
        if self.same_universe(other) {
            Ok(())
        } else {
            Err(RelationError::UniverseMismatch)
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.same_universe(other) && self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &Self) -> Result<Self, RelationError> {
        self.check_universe(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Self::from_bits(self.universe.clone(), bits))
    }

    pub fn is_transitive(&self) -> bool {
        self.bits.is_transitive()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size()).all(|i| self.contains(i, i))
    }

    pub fn is_total(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (i..n).all(|j| self.contains(i, j) || self.contains(j, i)))
    }

    pub fn classify(&self) -> PropertyReport {
        let n = self.size();
        let transitive = self.is_transitive();
        let mut symmetric = true;
        let mut asymmetric = true;
        let mut antisymmetric = true;
        for (i, j) in self.pairs() {
            let back = self.contains(j, i);
            symmetric &= back;
            asymmetric &= !back;
            antisymmetric &= !back || i == j;
        }
        let reflexive = self.is_reflexive();
        let irreflexive = (0..n).all(|i| !self.contains(i, i));
        let total = self.is_total();
        let preorder = transitive && reflexive;
        PropertyReport {
            transitive,
            symmetric,
            asymmetric,
            reflexive,
            irreflexive,
            antisymmetric,
            total,
            preorder,
            equivalence: preorder && symmetric,
            strict_partial_order: transitive && asymmetric,
            partial_order: preorder && antisymmetric,
            total_preorder: preorder && total,
        }
    }

    /// Smallest transitive superset, by reachability along chains of length ≥ 1.
    pub fn transitive_closure(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.close_transitively();
        Self::from_bits(self.universe.clone(), bits)
    }

    pub fn reflexive_closure(&self) -> Self {
        let mut bits = self.bits.clone();
        for i in 0..self.size() {
            bits.set(i, i);
        }
        Self::from_bits(self.universe.clone(), bits)
    }

    /// Reflexive transitive closure: the smallest preorder containing `self`.
    pub fn preorder_closure(&self) -> Self {
        self.reflexive_closure().transitive_closure()
    }

    pub fn invert(&self) -> Self {
        Self::from_bits(self.universe.clone(), self.bits.transpose())
    }

    pub fn symmetric_part(&self) -> Self {
        let mut bits = BitMatrix::new(self.size());
        for (i, j) in self.pairs() {
            if self.contains(j, i) {
                bits.set(i, j);
            }
        }
        Self::from_bits(self.universe.clone(), bits)
    }

    pub fn asymmetric_part(&self) -> Self {
        let mut bits = BitMatrix::new(self.size());
        for (i, j) in self.pairs() {
            if !self.contains(j, i) {
                bits.set(i, j);
            }
        }
        Self::from_bits(self.universe.clone(), bits)
    }

    pub fn split_parts(&self) -> Parts {
        Parts {
            symmetric: self.symmetric_part(),
            asymmetric: self.asymmetric_part(),
        }
    }

    /// Partition of the elements that occur in a symmetric transitive relation.
    ///
    /// Classes are returned as sorted index lists, ordered by their smallest
    /// member. Elements related to nothing are not part of any class.
    pub fn equivalence_classes(&self) -> Result<Vec<Vec<usize>>, RelationError> {
        let report = self.classify();
        if !(report.symmetric && report.transitive) {
            return Err(RelationError::NotSymmetricTransitive);
        }
        let n = self.size();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if seen[i] || !self.contains(i, i) {
                continue;
            }
            let class: Vec<usize> = (0..n).filter(|&j| self.contains(i, j)).collect();
            for &j in &class {
                seen[j] = true;
            }
            classes.push(class);
        }
        Ok(classes)
    }
}

/// Joins the symmetric part of `r1` with the asymmetric part of `r2`.
///
/// Requires both relations to be transitive, the strict part of `r2` to lie in
/// the strict part of `r1`, and the symmetric part of `r1` to lie in that of `r2`.
/// The result is transitive with exactly those two parts.
pub fn merge(r1: &Relation, r2: &Relation) -> Result<Relation, RelationError> {
    r1.check_universe(r2)?;
    if !r1.is_transitive() {
        return Err(RelationError::PreconditionViolated(
            "first relation is not transitive".into(),
        ));
    }
    if !r2.is_transitive() {
        return Err(RelationError::PreconditionViolated(
            "second relation is not transitive".into(),
        ));
    }
    let p1 = r1.split_parts();
    let p2 = r2.split_parts();
    if !p2.asymmetric.bits.is_subset(&p1.asymmetric.bits) {
        return Err(RelationError::PreconditionViolated(
            "asymmetric part of the second relation is not contained in that of the first".into(),
        ));
    }
    if !p1.symmetric.bits.is_subset(&p2.symmetric.bits) {
        return Err(RelationError::PreconditionViolated(
            "symmetric part of the first relation is not contained in that of the second".into(),
        ));
    }
    let mut bits = p1.symmetric.bits;
    bits.union_with(&p2.asymmetric.bits);
    Ok(Relation::from_bits(r1.universe.clone(), bits))
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.same_universe(other) && self.bits == other.bits
    }
}

impl Eq for Relation {}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut set = f.debug_set();
        for (i, j) in self.pairs() {
            set.entry(&format_args!("({}, {})", self.universe.id(i), self.universe.id(j)));
        }
        set.finish()
    }
}
