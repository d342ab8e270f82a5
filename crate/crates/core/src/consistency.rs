//! Chain consistency between two transitive relations, consistent extension,
//! minimal extensions and total completions on finite universes.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relation::{BitMatrix, Relation, RelationError};

/// Which of the two input relations a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    First,
    Second,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::First => f.write_str("first"),
            Operand::Second => f.write_str("second"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsistencyError {
    #[error("{0} relation is not transitive")]
    NotTransitive(Operand),
    #[error("relations are defined on different universes")]
    UniverseMismatch,
    #[error("elements are already comparable")]
    AlreadyComparable,
    #[error("cannot order an element strictly below itself")]
    SameElement,
    #[error("relations are not chain-consistent: {0}")]
    Inconsistent(Chain),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// Source of one link of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkTag {
    Sym1,
    Sym2,
    Strict1,
    Strict2,
}

impl LinkTag {
    pub fn is_strict(self) -> bool {
        matches!(self, LinkTag::Strict1 | LinkTag::Strict2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LinkTag::Sym1 => "sym1",
            LinkTag::Sym2 => "sym2",
            LinkTag::Strict1 => "strict1",
            LinkTag::Strict2 => "strict2",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            LinkTag::Sym1 => "~1",
            LinkTag::Sym2 => "~2",
            LinkTag::Strict1 => "<1",
            LinkTag::Strict2 => "<2",
        }
    }
}

/// A walk `nodes[0] -> nodes[1] -> ..` whose i-th link is drawn from the part
/// named by `tags[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    nodes: Vec<String>,
    tags: Vec<LinkTag>,
}

impl Chain {
    /// `tags.len()` must be `nodes.len() - 1`.
    pub fn new(nodes: Vec<String>, tags: Vec<LinkTag>) -> Option<Self> {
        (nodes.len() >= 2 && tags.len() + 1 == nodes.len()).then_some(Self { nodes, tags })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn tags(&self) -> &[LinkTag] {
        &self.tags
    }

    /// Number of links.
    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn is_circular(&self) -> bool {
        self.nodes.first() == self.nodes.last()
    }

    pub fn has_strict_link(&self) -> bool {
        self.tags.iter().any(|t| t.is_strict())
    }

    /// True iff every link belongs to the part of `r1` or `r2` its tag names,
    /// the chain is closed, and at least one link is strict.
    pub fn replays(&self, r1: &Relation, r2: &Relation) -> bool {
        if !self.is_circular() || !self.has_strict_link() {
            return false;
        }
        let universe = r1.universe();
        self.nodes
            .windows(2)
            .zip(&self.tags)
            .all(|(link, &tag)| {
                let (Some(a), Some(b)) = (universe.index_of(&link[0]), universe.index_of(&link[1]))
                else {
                    return false;
                };
                link_in_part(r1, r2, a, b, tag)
            })
    }

    /// Same cycle starting at the `k`-th node.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.len();
        let nodes = (0..=n).map(|i| self.nodes[(k + i) % n].clone()).collect();
        let tags = (0..n).map(|i| self.tags[(k + i) % n]).collect();
        Self { nodes, tags }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.nodes[0])?;
        for (node, tag) in self.nodes[1..].iter().zip(&self.tags) {
            write!(f, " {} {}", tag.symbol(), node)?;
        }
        Ok(())
    }
}

fn link_in_part(r1: &Relation, r2: &Relation, a: usize, b: usize, tag: LinkTag) -> bool {
    let (r, symmetric) = match tag {
        LinkTag::Sym1 => (r1, true),
        LinkTag::Sym2 => (r2, true),
        LinkTag::Strict1 => (r1, false),
        LinkTag::Strict2 => (r2, false),
    };
    r.contains(a, b) && r.contains(b, a) == symmetric
}

/// Outcome of a chain-consistency decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyVerdict {
    witness: Option<Chain>,
}

impl ConsistencyVerdict {
    pub fn consistent() -> Self {
        Self { witness: None }
    }

    pub fn inconsistent(witness: Chain) -> Self {
        Self {
            witness: Some(witness),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Chain> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<Chain> {
        self.witness
    }
}

fn require_transitive(r: &Relation, which: Operand) -> Result<(), ConsistencyError> {
    if r.is_transitive() {
        Ok(())
    } else {
        Err(ConsistencyError::NotTransitive(which))
    }
}

fn require_pair(r1: &Relation, r2: &Relation) -> Result<(), ConsistencyError> {
    if !r1.same_universe(r2) {
        return Err(ConsistencyError::UniverseMismatch);
    }
    require_transitive(r1, Operand::First)?;
    require_transitive(r2, Operand::Second)
}

/// Strongly connected components by iterative Tarjan; returns a component id
/// per vertex.
fn scc_ids(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // (vertex, next neighbour position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Tag for a link `(a, b)` of the union graph; strict parts take precedence.
fn tag_for(r1: &Relation, r2: &Relation, a: usize, b: usize) -> LinkTag {
    if r1.contains(a, b) && !r1.contains(b, a) {
        LinkTag::Strict1
    } else if r2.contains(a, b) && !r2.contains(b, a) {
        LinkTag::Strict2
    } else if r1.contains(a, b) {
        LinkTag::Sym1
    } else {
        LinkTag::Sym2
    }
}

/// Decides chain consistency of two transitive relations.
///
/// The relations are inconsistent iff some strict edge of either relation
/// closes a cycle in the union graph. The witness is a shortest such cycle,
/// starting at the source of its strict edge; ties go to the smallest
/// `(source, target)` strict edge.
pub fn chain_consistent(r1: &Relation, r2: &Relation) -> Result<ConsistencyVerdict, ConsistencyError> {
    require_pair(r1, r2)?;
    let n = r1.size();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| r1.contains(a, b) || r2.contains(a, b)).collect())
        .collect();
    let comp = scc_ids(&adj);
    let is_strict = |a: usize, b: usize| {
        (r1.contains(a, b) && !r1.contains(b, a)) || (r2.contains(a, b) && !r2.contains(b, a))
    };

    // offending strict edges grouped by target
    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut any = false;
    for a in 0..n {
        for &b in &adj[a] {
            if comp[a] == comp[b] && is_strict(a, b) {
                by_target[b].push(a);
                any = true;
            }
        }
    }
    if !any {
        return Ok(ConsistencyVerdict::consistent());
    }

    // (length, source, target, parent map of the BFS rooted at target)
    let mut best: Option<(usize, usize, usize, Vec<usize>)> = None;
    for (target, sources) in by_target.iter().enumerate() {
        if sources.is_empty() {
            continue;
        }
        let parent = bfs_parents(&adj, target);
        let dist = |mut v: usize| {
            let mut d = 0;
            while v != target {
                v = parent[v];
                d += 1;
            }
            d
        };
        for &source in sources {
            let len = 1 + dist(source);
            let better = match &best {
                None => true,
                Some((l, s, t, _)) => (len, source, target) < (*l, *s, *t),
            };
            if better {
                best = Some((len, source, target, parent.clone()));
            }
        }
    }
    let (_, source, target, parent) = best.expect("an offending edge exists");

    // source -> target, then target .. -> source along BFS tree reversed
    let mut back = vec![source];
    let mut v = source;
    while v != target {
        v = parent[v];
        back.push(v);
    }
    back.reverse(); // target .. source
    let mut path = vec![source];
    path.extend(back);

    let universe = r1.universe();
    let mut tags = Vec::with_capacity(path.len() - 1);
    let first_tag = if r1.contains(source, target) && !r1.contains(target, source) {
        LinkTag::Strict1
    } else {
        LinkTag::Strict2
    };
    tags.push(first_tag);
    for w in path[1..].windows(2) {
        tags.push(tag_for(r1, r2, w[0], w[1]));
    }
    let nodes = path.iter().map(|&i| universe.id(i).to_owned()).collect();
    Ok(ConsistencyVerdict::inconsistent(Chain { nodes, tags }))
}

/// BFS tree from `root`; `parent[v]` is the predecessor of `v` on a shortest
/// path from `root`. Unreached vertices keep `usize::MAX`.
fn bfs_parents(adj: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    parent
}

/// True iff `r2` consistently extends `r1`: both the symmetric and the
/// asymmetric part of `r1` are contained in the corresponding part of `r2`.
pub fn consistently_extends(r2: &Relation, r1: &Relation) -> Result<bool, ConsistencyError> {
    if !r1.same_universe(r2) {
        return Err(ConsistencyError::UniverseMismatch);
    }
    Ok(r1.pairs().all(|(a, b)| {
        let sym1 = r1.contains(b, a);
        r2.contains(a, b) && r2.contains(b, a) == sym1
    }))
}

/// Reflexive transitive closure of the union: the smallest preorder
/// containing both relations.
pub fn generated_preorder(r1: &Relation, r2: &Relation) -> Result<Relation, ConsistencyError> {
    if !r1.same_universe(r2) {
        return Err(ConsistencyError::UniverseMismatch);
    }
    Ok(r1.union(r2)?.preorder_closure())
}

/// Adds `alpha < beta` to `p` together with every pair forced by transitivity.
pub fn minimal_extension(p: &Relation, alpha: &str, beta: &str) -> Result<Relation, ConsistencyError> {
    let a = p.universe().resolve(alpha)?;
    let b = p.universe().resolve(beta)?;
    minimal_extension_at(p, a, b)
}

/// Index form of [`minimal_extension`].
pub fn minimal_extension_at(p: &Relation, alpha: usize, beta: usize) -> Result<Relation, ConsistencyError> {
    let n = p.size();
    if alpha >= n {
        return Err(RelationError::IndexOutOfRange(alpha).into());
    }
    if beta >= n {
        return Err(RelationError::IndexOutOfRange(beta).into());
    }
    require_transitive(p, Operand::First)?;
    if alpha == beta {
        return Err(ConsistencyError::SameElement);
    }
    if p.contains(alpha, beta) || p.contains(beta, alpha) {
        return Err(ConsistencyError::AlreadyComparable);
    }
    let mut bits = p.bits().clone();
    extend_in_place(&mut bits, n, alpha, beta);
    Ok(Relation::from_bits(p.universe().clone(), bits))
}

/// `bits ∪ {(g, d) : (g ≼ alpha or g = alpha) and (beta ≼ d or d = beta)}`
fn extend_in_place(bits: &mut BitMatrix, n: usize, alpha: usize, beta: usize) {
    let lower: Vec<usize> = (0..n)
        .filter(|&g| g == alpha || bits.get(g, alpha))
        .collect();
    let upper: Vec<usize> = (0..n).filter(|&d| d == beta || bits.get(beta, d)).collect();
    for &g in &lower {
        for &d in &upper {
            bits.set(g, d);
        }
    }
}

fn first_incomparable(bits: &BitMatrix, n: usize, from: usize) -> Option<(usize, usize)> {
    (from..n).find_map(|i| {
        (i + 1..n)
            .find(|&j| !bits.get(i, j) && !bits.get(j, i))
            .map(|j| (i, j))
    })
}

/// Deterministic total preorder consistently extending a transitive relation.
///
/// Starts from the reflexive transitive closure and repeatedly orders the
/// lexicographically smallest incomparable index pair `(i, j)` as `i < j`.
pub fn consistent_completion(p: &Relation) -> Result<Relation, ConsistencyError> {
    require_transitive(p, Operand::First)?;
    let n = p.size();
    let mut bits = p.preorder_closure().bits().clone();
    let mut from = 0;
    while let Some((i, j)) = first_incomparable(&bits, n, from) {
        extend_in_place(&mut bits, n, i, j);
        from = i;
    }
    Ok(Relation::from_bits(p.universe().clone(), bits))
}

/// Every intermediate relation of [`consistent_completion`], starting with the
/// reflexive transitive closure and ending with the completion.
pub fn completion_trace(p: &Relation) -> Result<Vec<Relation>, ConsistencyError> {
    require_transitive(p, Operand::First)?;
    let n = p.size();
    let mut current = p.preorder_closure();
    let mut trace = vec![current.clone()];
    let mut from = 0;
    while let Some((i, j)) = first_incomparable(current.bits(), n, from) {
        current = minimal_extension_at(&current, i, j)?;
        trace.push(current.clone());
        from = i;
    }
    Ok(trace)
}

/// A total preorder consistently extending both relations, or the
/// inconsistency witness.
pub fn common_completion(r1: &Relation, r2: &Relation) -> Result<Relation, ConsistencyError> {
    let verdict = chain_consistent(r1, r2)?;
    if let Some(chain) = verdict.into_witness() {
        return Err(ConsistencyError::Inconsistent(chain));
    }
    consistent_completion(&generated_preorder(r1, r2)?)
}

/// Whether the common completion of two consistent relations is unique, which
/// holds exactly when their generated preorder is already total.
pub fn completion_unique(r1: &Relation, r2: &Relation) -> Result<bool, ConsistencyError> {
    let verdict = chain_consistent(r1, r2)?;
    if let Some(chain) = verdict.into_witness() {
        return Err(ConsistencyError::Inconsistent(chain));
    }
    Ok(generated_preorder(r1, r2)?.is_total())
}
