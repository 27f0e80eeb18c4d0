//! Skew-symmetric directed multigraphs.
//!
//! Vertices come in conjugate pairs `(i, -i)` for `i` in `1..=n_pairs` and are
//! stored densely at index `2(i-1)` (positive) and `2(i-1)+1` (negative), so
//! conjugation is `index ^ 1`. Arcs are allocated in conjugate pairs as well:
//! arc `2p` is the arc the caller asked for and arc `2p+1` its conjugate.
//!
//! Deletions are a per-arc mask that is only ever changed a whole conjugate
//! pair at a time, so the visible graph stays skew-symmetric.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{contract, internal, Error, Result};
use crate::scc::{tarjan, Csr};

/// A signed vertex identifier; the conjugate of `v` is `-v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(i32);

impl VertexId {
    pub fn new(raw: i32) -> Option<Self> {
        (raw != 0 && raw != i32::MIN).then_some(VertexId(raw))
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn conjugate(self) -> Self {
        VertexId(-self.0)
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Zero-based pair number, `|v| - 1`.
    pub fn pair(self) -> usize {
        self.0.unsigned_abs() as usize - 1
    }

    /// Dense index: `2(|v|-1)` for positive vertices, one more for negative.
    pub fn index(self) -> usize {
        2 * self.pair() + usize::from(self.0 < 0)
    }

    pub fn from_index(index: usize) -> Self {
        let magnitude = (index / 2 + 1) as i32;
        if index % 2 == 0 {
            VertexId(magnitude)
        } else {
            VertexId(-magnitude)
        }
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense arc index; arcs `2p` and `2p+1` are conjugates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcId(pub usize);

impl ArcId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn conjugate(self) -> Self {
        ArcId(self.0 ^ 1)
    }

    /// Zero-based index of the conjugate pair this arc belongs to.
    pub fn pair(self) -> usize {
        self.0 >> 1
    }

    /// The even (as-declared) arc of a pair.
    pub fn from_pair(pair: usize) -> Self {
        ArcId(pair << 1)
    }
}

/// Result of [`VertexSet::symmetry`] / [`ArcSet::symmetry`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetSymmetry {
    /// `S ∩ σ(S) = ∅`.
    pub regular: bool,
    /// `S = σ(S)`.
    pub self_conjugate: bool,
}

fn symmetry_of(bits: &FixedBitSet) -> SetSymmetry {
    let mut regular = true;
    let mut self_conjugate = true;
    for i in bits.ones() {
        if bits.contains(i ^ 1) {
            regular = false;
        } else {
            self_conjugate = false;
        }
    }
    SetSymmetry {
        regular,
        self_conjugate,
    }
}

fn conjugate_bits(bits: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(bits.len());
    for i in bits.ones() {
        out.insert(i ^ 1);
    }
    out
}

/// A set of vertices backed by a bitset over the dense vertex index.
/// Iteration is in ascending index order: `1, -1, 2, -2, ...`.
#[derive(Clone, PartialEq, Eq)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    /// Empty set sized for a graph with `n_pairs` vertex pairs.
    pub fn new(n_pairs: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(2 * n_pairs),
        }
    }

    pub fn for_graph(g: &SkewGraph) -> Self {
        Self::new(g.n_pairs())
    }

    pub fn from_vertices(n_pairs: usize, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut set = Self::new(n_pairs);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn capacity_pairs(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.bits.contains(v.index());
        self.bits.insert(v.index());
        fresh
    }

    pub fn remove(&mut self, v: VertexId) {
        self.bits.set(v.index(), false);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.contains(v.index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.ones().map(VertexId::from_index)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    /// `σ(S)`.
    pub fn conjugate(&self) -> Self {
        VertexSet {
            bits: conjugate_bits(&self.bits),
        }
    }

    pub fn symmetry(&self) -> SetSymmetry {
        symmetry_of(&self.bits)
    }

    pub fn is_regular(&self) -> bool {
        !self.bits.ones().any(|i| self.bits.contains(i ^ 1))
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of arcs backed by a bitset over arc indices.
#[derive(Clone, PartialEq, Eq)]
pub struct ArcSet {
    bits: FixedBitSet,
}

impl ArcSet {
    pub fn new(n_arcs: usize) -> Self {
        ArcSet {
            bits: FixedBitSet::with_capacity(n_arcs),
        }
    }

    pub fn for_graph(g: &SkewGraph) -> Self {
        Self::new(g.n_arcs())
    }

    pub fn from_arcs(n_arcs: usize, arcs: impl IntoIterator<Item = ArcId>) -> Self {
        let mut set = Self::new(n_arcs);
        for a in arcs {
            set.insert(a);
        }
        set
    }

    pub fn insert(&mut self, a: ArcId) -> bool {
        let fresh = !self.bits.contains(a.0);
        self.bits.insert(a.0);
        fresh
    }

    pub fn insert_pair(&mut self, a: ArcId) {
        self.bits.insert(a.0);
        self.bits.insert(a.0 ^ 1);
    }

    pub fn remove(&mut self, a: ArcId) {
        self.bits.set(a.0, false);
    }

    pub fn contains(&self, a: ArcId) -> bool {
        self.bits.contains(a.0)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.bits.ones().map(ArcId)
    }

    pub fn to_vec(&self) -> Vec<ArcId> {
        self.iter().collect()
    }

    pub fn conjugate(&self) -> Self {
        ArcSet {
            bits: conjugate_bits(&self.bits),
        }
    }

    /// `S ∪ σ(S)`.
    pub fn symmetric_closure(&self) -> Self {
        let mut bits = conjugate_bits(&self.bits);
        bits.union_with(&self.bits);
        ArcSet { bits }
    }

    pub fn symmetry(&self) -> SetSymmetry {
        symmetry_of(&self.bits)
    }

    pub fn union_with(&mut self, other: &ArcSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// One representative (the even arc) per conjugate pair touched by the set.
    pub fn pairs(&self) -> Vec<ArcId> {
        let mut out: Vec<ArcId> = self.iter().map(|a| ArcId::from_pair(a.pair())).collect();
        out.dedup();
        out
    }
}

impl fmt::Debug for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// Strongly-connected-component labels of the undeleted part of a graph.
#[derive(Clone, Debug)]
pub struct SccLabels {
    labels: Vec<usize>,
    count: usize,
}

impl SccLabels {
    pub fn label(&self, v: VertexId) -> usize {
        self.labels[v.index()]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// True when `v` and `σ(v)` share a component.
    pub fn conflicted(&self, v: VertexId) -> bool {
        self.labels[v.index()] == self.labels[v.index() ^ 1]
    }
}

/// A skew-symmetric directed multigraph with a self-conjugate deletion mask.
#[derive(Clone, Debug)]
pub struct SkewGraph {
    n_pairs: usize,
    tails: Vec<u32>,
    heads: Vec<u32>,
    out_offsets: Vec<usize>,
    out_arcs: Vec<ArcId>,
    in_offsets: Vec<usize>,
    in_arcs: Vec<ArcId>,
    deleted: FixedBitSet,
}

impl SkewGraph {
    /// Builds the graph with arcs `(u, v)` and `(σ(v), σ(u))` for every requested pair.
    pub fn build(n_pairs: usize, arc_pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        if n_pairs > (i32::MAX / 2) as usize {
            return Err(Error::Malformed(format!("too many vertex pairs: {n_pairs}")));
        }
        let in_range = |v: VertexId| v.pair() < n_pairs;
        let mut tails = Vec::with_capacity(2 * arc_pairs.len());
        let mut heads = Vec::with_capacity(2 * arc_pairs.len());
        for (p, &(u, v)) in arc_pairs.iter().enumerate() {
            if !in_range(u) || !in_range(v) {
                return Err(Error::Malformed(format!(
                    "arc pair {p} = ({u}, {v}) has an endpoint outside ±1..±{n_pairs}"
                )));
            }
            tails.push(u.index() as u32);
            heads.push(v.index() as u32);
            tails.push(v.conjugate().index() as u32);
            heads.push(u.conjugate().index() as u32);
        }
        Ok(Self::from_endpoints(n_pairs, tails, heads))
    }

    /// Same as [`SkewGraph::build`] with raw signed integers.
    pub fn from_raw(n_pairs: usize, arc_pairs: &[(i32, i32)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(arc_pairs.len());
        for &(u, v) in arc_pairs {
            let (Some(u), Some(v)) = (VertexId::new(u), VertexId::new(v)) else {
                return Err(Error::Malformed(format!("arc ({u}, {v}) uses vertex 0")));
            };
            pairs.push((u, v));
        }
        Self::build(n_pairs, &pairs)
    }

    fn from_endpoints(n_pairs: usize, tails: Vec<u32>, heads: Vec<u32>) -> Self {
        let n = 2 * n_pairs;
        let m = tails.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for a in 0..m {
            out_offsets[tails[a] as usize + 1] += 1;
            in_offsets[heads[a] as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut out_fill = out_offsets.clone();
        let mut in_fill = in_offsets.clone();
        let mut out_arcs = vec![ArcId(0); m];
        let mut in_arcs = vec![ArcId(0); m];
        for a in 0..m {
            let t = tails[a] as usize;
            let h = heads[a] as usize;
            out_arcs[out_fill[t]] = ArcId(a);
            out_fill[t] += 1;
            in_arcs[in_fill[h]] = ArcId(a);
            in_fill[h] += 1;
        }
        SkewGraph {
            n_pairs,
            tails,
            heads,
            out_offsets,
            out_arcs,
            in_offsets,
            in_arcs,
            deleted: FixedBitSet::with_capacity(m),
        }
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_vertices(&self) -> usize {
        2 * self.n_pairs
    }

    pub fn n_arcs(&self) -> usize {
        self.tails.len()
    }

    pub fn n_arc_pairs(&self) -> usize {
        self.tails.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n_vertices()).map(VertexId::from_index)
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> {
        (0..self.n_arcs()).map(ArcId)
    }

    pub fn tail(&self, a: ArcId) -> VertexId {
        VertexId::from_index(self.tails[a.0] as usize)
    }

    pub fn head(&self, a: ArcId) -> VertexId {
        VertexId::from_index(self.heads[a.0] as usize)
    }

    pub(crate) fn tail_index(&self, a: ArcId) -> usize {
        self.tails[a.0] as usize
    }

    pub(crate) fn head_index(&self, a: ArcId) -> usize {
        self.heads[a.0] as usize
    }

    /// All out-arcs of `v`, deleted ones included.
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        self.out_arcs_at(v.index())
    }

    /// All in-arcs of `v`, deleted ones included.
    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        self.in_arcs_at(v.index())
    }

    pub(crate) fn out_arcs_at(&self, index: usize) -> &[ArcId] {
        &self.out_arcs[self.out_offsets[index]..self.out_offsets[index + 1]]
    }

    pub(crate) fn in_arcs_at(&self, index: usize) -> &[ArcId] {
        &self.in_arcs[self.in_offsets[index]..self.in_offsets[index + 1]]
    }

    pub fn is_deleted(&self, a: ArcId) -> bool {
        self.deleted.contains(a.0)
    }

    pub fn is_active(&self, a: ArcId) -> bool {
        !self.deleted.contains(a.0)
    }

    /// Deletes `a` together with its conjugate.
    pub fn delete_pair(&mut self, a: ArcId) {
        self.deleted.insert(a.0);
        self.deleted.insert(a.0 ^ 1);
    }

    pub fn restore_pair(&mut self, a: ArcId) {
        self.deleted.set(a.0, false);
        self.deleted.set(a.0 ^ 1, false);
    }

    pub fn deleted_arcs(&self) -> ArcSet {
        ArcSet {
            bits: self.deleted.clone(),
        }
    }

    /// Replaces the deletion mask. The mask must be self-conjugate.
    pub fn set_deleted(&mut self, mask: &ArcSet) -> Result<()> {
        if mask.bits.len() != self.n_arcs() {
            return Err(contract!("mask sized for {} arcs, graph has {}", mask.bits.len(), self.n_arcs()));
        }
        if !mask.symmetry().self_conjugate {
            return Err(contract!("deletion mask is not self-conjugate"));
        }
        self.deleted = mask.bits.clone();
        Ok(())
    }

    pub fn clear_deletions(&mut self) {
        self.deleted.clear();
    }

    /// Undeleted out-arcs of the vertex at dense index `index`.
    pub(crate) fn active_out_at(&self, index: usize) -> impl Iterator<Item = ArcId> + '_ {
        self.out_arcs_at(index).iter().copied().filter(move |a| !self.deleted.contains(a.0))
    }

    pub(crate) fn active_in_at(&self, index: usize) -> impl Iterator<Item = ArcId> + '_ {
        self.in_arcs_at(index).iter().copied().filter(move |a| !self.deleted.contains(a.0))
    }

    /// Checks the involution axioms: every arc's conjugate reverses and
    /// conjugates its endpoints, and the mask is self-conjugate.
    pub fn validate(&self) -> Result<()> {
        if self.tails.len() % 2 != 0 {
            return Err(internal!("odd arc count"));
        }
        for a in 0..self.n_arcs() {
            let b = a ^ 1;
            if self.tails[b] as usize != (self.heads[a] as usize ^ 1)
                || self.heads[b] as usize != (self.tails[a] as usize ^ 1)
            {
                return Err(internal!("arc {a} and its conjugate {b} break endpoint symmetry"));
            }
            if self.deleted.contains(a) != self.deleted.contains(b) {
                return Err(internal!("deletion mask differs on arcs {a} and {b}"));
            }
        }
        Ok(())
    }

    /// `R(L, deleted ∪ extra)`: vertices reachable from `sources`.
    pub fn reachable(&self, sources: &VertexSet, extra_deleted: Option<&ArcSet>) -> VertexSet {
        let mut seen = VertexSet::for_graph(self);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in sources.iter() {
            seen.bits.insert(v.index());
            queue.push_back(v.index());
        }
        while let Some(u) = queue.pop_front() {
            for a in self.active_out_at(u) {
                if extra_deleted.is_some_and(|x| x.contains(a)) {
                    continue;
                }
                let w = self.heads[a.0] as usize;
                if !seen.bits.contains(w) {
                    seen.bits.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices that can reach `targets`.
    pub fn co_reachable(&self, targets: &VertexSet, extra_deleted: Option<&ArcSet>) -> VertexSet {
        let mut seen = VertexSet::for_graph(self);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in targets.iter() {
            seen.bits.insert(v.index());
            queue.push_back(v.index());
        }
        while let Some(u) = queue.pop_front() {
            for a in self.active_in_at(u) {
                if extra_deleted.is_some_and(|x| x.contains(a)) {
                    continue;
                }
                let w = self.tails[a.0] as usize;
                if !seen.bits.contains(w) {
                    seen.bits.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices reachable from `sources` using only vertices inside `within`.
    pub fn reachable_within(&self, sources: &VertexSet, within: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::for_graph(self);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in sources.iter() {
            if within.contains(v) {
                seen.bits.insert(v.index());
                queue.push_back(v.index());
            }
        }
        while let Some(u) = queue.pop_front() {
            for a in self.active_out_at(u) {
                let w = self.heads[a.0] as usize;
                if within.bits.contains(w) && !seen.bits.contains(w) {
                    seen.bits.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// `δ⁺(Z)` over undeleted arcs, ascending.
    pub fn out_boundary(&self, set: &VertexSet) -> Vec<ArcId> {
        let mut out = Vec::new();
        for u in set.bits.ones() {
            for a in self.active_out_at(u) {
                if !set.bits.contains(self.heads[a.0] as usize) {
                    out.push(a);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `δ⁻(Z)` over undeleted arcs, ascending.
    pub fn in_boundary(&self, set: &VertexSet) -> Vec<ArcId> {
        let mut out = Vec::new();
        for v in set.bits.ones() {
            for a in self.active_in_at(v) {
                if !set.bits.contains(self.tails[a.0] as usize) {
                    out.push(a);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn active_csr(&self) -> Csr {
        let n = self.n_vertices();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(self.n_arcs());
        offsets.push(0);
        for u in 0..n {
            targets.extend(self.active_out_at(u).map(|a| self.heads[a.0] as usize));
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    /// Strongly connected components of the undeleted graph.
    pub fn scc_labels(&self) -> SccLabels {
        let (count, labels) = tarjan(&self.active_csr());
        SccLabels { labels, count }
    }
}
