//! Minimum `L`-`L'` separators by unit-capacity augmenting paths, and the
//! layered chain of source sides that covers every minimum separator.
//!
//! The terminal sets are handled as if a super-source fed every vertex of `L`
//! and every vertex of `L'` drained into a super-sink, both with unbounded
//! capacity. These virtual arcs are never materialized in the graph and can
//! never appear in a returned cut.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::error::{contract, internal, Result};
use crate::graph::{ArcId, ArcSet, SkewGraph, VertexId, VertexSet};
use crate::scc::{tarjan, Csr};

/// A minimum `L`-`L'` separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorResult {
    pub lambda: usize,
    /// `δ⁺(source_side)`.
    pub cut_arcs: ArcSet,
    /// `R(L, cut_arcs)`.
    pub source_side: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparatorOutcome {
    Found(SeparatorResult),
    /// More than `cap` arc-disjoint `L`-`L'` paths exist.
    Exceeded,
}

/// The chain `X_1 ⊂ X_2 ⊂ ... ⊂ X_q` of source sides, stored as layer
/// differences, with `δ⁺(X_i)` for every prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCollection {
    pub lambda: usize,
    /// `X_1, X_2 ∖ X_1, ..., X_q ∖ X_{q-1}`, each in discovery order.
    pub layer_diffs: Vec<Vec<VertexId>>,
    /// `δ⁺(X_i)`, ascending.
    pub boundaries: Vec<Vec<ArcId>>,
}

impl LayeredCollection {
    pub fn len(&self) -> usize {
        self.layer_diffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layer_diffs.is_empty()
    }

    /// `X_{i+1}` (zero-based prefix index).
    pub fn prefix(&self, n_pairs: usize, i: usize) -> VertexSet {
        VertexSet::from_vertices(n_pairs, self.layer_diffs[..=i].iter().flatten().copied())
    }
}

/// Residual bookkeeping for one flow computation.
struct FlowState<'g> {
    graph: &'g SkewGraph,
    /// Conjugate pair treated as deleted on top of the graph's mask.
    skip_pair: Option<usize>,
    carrying: FixedBitSet,
    value: usize,
}

impl<'g> FlowState<'g> {
    fn new(graph: &'g SkewGraph, skip_pair: Option<usize>) -> Self {
        FlowState {
            graph,
            skip_pair,
            carrying: FixedBitSet::with_capacity(graph.n_arcs()),
            value: 0,
        }
    }

    fn usable(&self, a: ArcId) -> bool {
        self.graph.is_active(a) && self.skip_pair != Some(a.pair())
    }

    /// One BFS in the residual graph from `sources`; augments along the first
    /// path that reaches `sinks`.
    fn augment(&mut self, sources: &VertexSet, sinks: &VertexSet) -> bool {
        let g = self.graph;
        let n = g.n_vertices();
        let mut via = vec![usize::MAX; n];
        let mut seen = FixedBitSet::with_capacity(n);
        let mut queue = VecDeque::new();
        for v in sources.iter() {
            seen.insert(v.index());
            queue.push_back(v.index());
        }
        let mut end = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for &a in g.out_arcs_at(u) {
                if self.carrying.contains(a.0) || !self.usable(a) {
                    continue;
                }
                let w = g.head_index(a);
                if !seen.contains(w) {
                    seen.insert(w);
                    via[w] = a.0;
                    if sinks.contains(VertexId::from_index(w)) {
                        end = Some(w);
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
            for &a in g.in_arcs_at(u) {
                if !self.carrying.contains(a.0) || !self.usable(a) {
                    continue;
                }
                let w = g.tail_index(a);
                if !seen.contains(w) {
                    seen.insert(w);
                    via[w] = a.0;
                    if sinks.contains(VertexId::from_index(w)) {
                        end = Some(w);
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        let Some(mut v) = end else {
            return false;
        };
        while !sources.contains(VertexId::from_index(v)) {
            let a = ArcId(via[v]);
            if self.carrying.contains(a.0) {
                self.carrying.set(a.0, false);
                v = g.head_index(a);
            } else {
                self.carrying.insert(a.0);
                v = g.tail_index(a);
            }
        }
        self.value += 1;
        true
    }

    /// Runs augmentations until none remain or the value exceeds `cap`.
    fn saturate(&mut self, sources: &VertexSet, sinks: &VertexSet, cap: usize) -> bool {
        while self.value <= cap {
            if !self.augment(sources, sinks) {
                return true;
            }
        }
        false
    }

    fn residual_reach(&self, sources: &VertexSet) -> VertexSet {
        let g = self.graph;
        let mut seen = VertexSet::for_graph(g);
        let mut queue: VecDeque<usize> = sources.iter().map(|v| v.index()).collect();
        for v in sources.iter() {
            seen.insert(v);
        }
        while let Some(u) = queue.pop_front() {
            let forward = g
                .out_arcs_at(u)
                .iter()
                .filter(|&&a| !self.carrying.contains(a.0) && self.usable(a))
                .map(|&a| g.head_index(a));
            let backward = g
                .in_arcs_at(u)
                .iter()
                .filter(|&&a| self.carrying.contains(a.0) && self.usable(a))
                .map(|&a| g.tail_index(a));
            for w in forward.chain(backward).collect::<Vec<_>>() {
                if seen.insert(VertexId::from_index(w)) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

fn check_terminals(g: &SkewGraph, terminals: &VertexSet) -> Result<()> {
    if terminals.capacity_pairs() != g.n_pairs() {
        return Err(contract!(
            "terminal set sized for {} pairs, graph has {}",
            terminals.capacity_pairs(),
            g.n_pairs()
        ));
    }
    if !terminals.is_regular() {
        return Err(contract!("terminal set {terminals:?} is not regular"));
    }
    Ok(())
}

fn flow_cut(
    g: &SkewGraph,
    terminals: &VertexSet,
    cap: usize,
    skip_pair: Option<usize>,
) -> Result<SeparatorOutcome> {
    check_terminals(g, terminals)?;
    let sinks = terminals.conjugate();
    let mut flow = FlowState::new(g, skip_pair);
    if !flow.saturate(terminals, &sinks, cap) {
        return Ok(SeparatorOutcome::Exceeded);
    }
    let reach = flow.residual_reach(terminals);
    let mut cut = ArcSet::for_graph(g);
    for a in g.out_boundary(&reach) {
        if skip_pair != Some(a.pair()) {
            cut.insert(a);
        }
    }
    if cut.len() != flow.value {
        return Err(internal!(
            "residual cut has {} arcs but the flow value is {}",
            cut.len(),
            flow.value
        ));
    }
    let mut removed = cut.clone();
    if let Some(p) = skip_pair {
        removed.insert_pair(ArcId::from_pair(p));
    }
    let source_side = g.reachable(terminals, Some(&removed));
    Ok(SeparatorOutcome::Found(SeparatorResult {
        lambda: flow.value,
        cut_arcs: cut,
        source_side,
    }))
}

/// Minimum `L`-`L'` separator, or `Exceeded` once more than `cap` disjoint
/// paths have been found.
pub fn min_separator(g: &SkewGraph, terminals: &VertexSet, cap: usize) -> Result<SeparatorOutcome> {
    flow_cut(g, terminals, cap, None)
}

/// `λ(L, L')` if it is at most `cap`.
pub fn separator_size(g: &SkewGraph, terminals: &VertexSet, cap: usize) -> Result<Option<usize>> {
    check_terminals(g, terminals)?;
    let mut flow = FlowState::new(g, None);
    let sinks = terminals.conjugate();
    Ok(flow.saturate(terminals, &sinks, cap).then_some(flow.value))
}

/// True iff some minimum `L`-`L'` separator contains both `y` and `σ(y)`,
/// decided by checking that deleting the pair lowers `λ` by exactly two.
pub fn has_min_separator_with_pair(
    g: &SkewGraph,
    terminals: &VertexSet,
    y: ArcId,
    lambda: usize,
) -> Result<bool> {
    Ok(separator_with_pair(g, terminals, y, lambda)?.is_some())
}

/// A minimum separator containing `y` and `σ(y)`, if one exists.
pub fn separator_with_pair(
    g: &SkewGraph,
    terminals: &VertexSet,
    y: ArcId,
    lambda: usize,
) -> Result<Option<ArcSet>> {
    if lambda < 2 || g.is_deleted(y) {
        return Ok(None);
    }
    match flow_cut(g, terminals, lambda - 2, Some(y.pair()))? {
        SeparatorOutcome::Exceeded => Ok(None),
        SeparatorOutcome::Found(res) => {
            if res.lambda != lambda - 2 {
                return Err(internal!(
                    "deleting one arc pair dropped the separator value from {lambda} to {}",
                    res.lambda
                ));
            }
            let mut cut = res.cut_arcs;
            cut.insert_pair(y);
            Ok(Some(cut))
        }
    }
}

/// Builds the layered chain of source sides for a graph whose minimum
/// separator value is `lambda > 0`.
///
/// After a maximum flow, the strongly connected components of the residual
/// graph are numbered topologically (`α`), and for every level `i` between
/// the sink's and the source's component the set `Y_i = {v : α(v) ≥ i}` has
/// exactly `lambda` saturated out-arcs. The layers are the parts of the `Y_i`
/// reachable from `L` inside themselves, found by one BFS that parks vertices
/// which are not yet admissible at the current level.
pub fn separator_collection(
    g: &SkewGraph,
    terminals: &VertexSet,
    lambda: usize,
) -> Result<LayeredCollection> {
    if lambda == 0 {
        return Err(contract!("the layered collection needs a positive separator value"));
    }
    check_terminals(g, terminals)?;
    let sinks = terminals.conjugate();
    let mut flow = FlowState::new(g, None);
    flow.saturate(terminals, &sinks, lambda);
    if flow.value != lambda {
        return Err(internal!(
            "separator value is {} but the collection was requested for {lambda}",
            flow.value
        ));
    }

    let n = g.n_vertices();
    let source = n;
    let sink = n + 1;
    let mut edges = Vec::with_capacity(g.n_arcs() + 2 * terminals.len() + 2);
    let mut outflow = vec![0usize; n];
    let mut inflow = vec![0usize; n];
    for a in g.arcs() {
        if !g.is_active(a) {
            continue;
        }
        let (u, v) = (g.tail_index(a), g.head_index(a));
        if flow.carrying.contains(a.0) {
            edges.push((v, u));
            outflow[u] += 1;
            inflow[v] += 1;
        } else {
            edges.push((u, v));
        }
    }
    for l in terminals.iter() {
        edges.push((source, l.index()));
        if outflow[l.index()] > inflow[l.index()] {
            edges.push((l.index(), source));
        }
    }
    for l in sinks.iter() {
        edges.push((l.index(), sink));
        if inflow[l.index()] > outflow[l.index()] {
            edges.push((sink, l.index()));
        }
    }
    let (n_comp, labels) = tarjan(&Csr::from_edges(n + 2, &edges));
    let alpha: Vec<usize> = labels.iter().map(|&c| n_comp - 1 - c).collect();
    let (alpha_s, alpha_t) = (alpha[source], alpha[sink]);
    if alpha_t >= alpha_s {
        return Err(internal!("residual graph has no sink-to-source path"));
    }

    // Admissibility window: v is forbidden at level i iff lo[v] <= i <= hi[v].
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![0usize; n];
    for v in 0..n {
        if alpha[v] >= alpha_s {
            continue;
        }
        let beta = g
            .active_in_at(v)
            .map(|a| alpha[g.tail_index(a)])
            .filter(|&x| x > alpha[v])
            .max();
        if let Some(beta) = beta {
            hi[v] = beta.min(alpha_s);
            lo[v] = (alpha[v] + 1).max(alpha_t + 1);
        }
    }
    let forbidden = |v: usize, i: usize| lo[v] <= i && i <= hi[v];

    let mut visited = FixedBitSet::with_capacity(n);
    let mut parked = FixedBitSet::with_capacity(n);
    let mut parked_list: Vec<usize> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for l in terminals.iter() {
        visited.insert(l.index());
        queue.push_back(l.index());
    }

    let mut in_x = FixedBitSet::with_capacity(n);
    let mut in_cut = FixedBitSet::with_capacity(g.n_arcs());
    let mut candidates: Vec<ArcId> = Vec::new();
    let mut cut_size = 0usize;

    let mut collection = LayeredCollection {
        lambda,
        layer_diffs: Vec::new(),
        boundaries: Vec::new(),
    };
    let mut level = alpha_s;
    loop {
        let mut layer = Vec::new();
        while let Some(u) = queue.pop_front() {
            layer.push(VertexId::from_index(u));
            in_x.insert(u);
            for a in g.active_in_at(u) {
                let w = g.tail_index(a);
                if w != u && in_x.contains(w) {
                    in_cut.set(a.0, false);
                    cut_size -= 1;
                }
            }
            for a in g.active_out_at(u) {
                let w = g.head_index(a);
                if !in_x.contains(w) {
                    in_cut.insert(a.0);
                    candidates.push(a);
                    cut_size += 1;
                }
                if visited.contains(w) || parked.contains(w) {
                    continue;
                }
                if forbidden(w, level) {
                    parked.insert(w);
                    parked_list.push(w);
                } else {
                    visited.insert(w);
                    queue.push_back(w);
                }
            }
        }
        if !layer.is_empty() {
            if cut_size != lambda {
                return Err(internal!(
                    "layer {} has out-degree {cut_size}, expected {lambda}",
                    collection.len()
                ));
            }
            candidates.retain(|a| in_cut.contains(a.0));
            candidates.sort_unstable();
            collection.layer_diffs.push(layer);
            collection.boundaries.push(candidates.clone());
        }
        if level == alpha_t + 1 {
            break;
        }
        level -= 1;
        parked_list.retain(|&v| {
            if forbidden(v, level) {
                true
            } else {
                parked.set(v, false);
                visited.insert(v);
                queue.push_back(v);
                false
            }
        });
    }
    Ok(collection)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: &SkewGraph, vs: &[i32]) -> VertexSet {
        VertexSet::from_vertices(g.n_pairs(), vs.iter().map(|&x| VertexId::new(x).unwrap()))
    }

    fn found(o: SeparatorOutcome) -> SeparatorResult {
        match o {
            SeparatorOutcome::Found(r) => r,
            SeparatorOutcome::Exceeded => panic!("unexpected Exceeded"),
        }
    }

    #[test]
    fn disconnected_is_zero() {
        let g = SkewGraph::from_raw(3, &[(1, 2), (3, -3)]).unwrap();
        let r = found(min_separator(&g, &set(&g, &[1]), 2).unwrap());
        assert_eq!(r.lambda, 0);
        assert!(r.cut_arcs.is_empty());
        assert_eq!(r.source_side, set(&g, &[1, 2]));
    }

    #[test]
    fn forced_parallel_pair_needs_both() {
        let g = SkewGraph::from_raw(1, &[(1, -1)]).unwrap();
        let r = found(min_separator(&g, &set(&g, &[1]), 2).unwrap());
        assert_eq!(r.lambda, 2);
        assert_eq!(r.cut_arcs.to_vec(), vec![ArcId(0), ArcId(1)]);
    }

    #[test]
    fn cap_is_respected() {
        // two routes and their conjugates give four disjoint paths
        let g = SkewGraph::from_raw(4, &[(1, 2), (2, -1), (1, 3), (3, 4), (4, -1)]).unwrap();
        let l = set(&g, &[1]);
        assert_eq!(separator_size(&g, &l, 10).unwrap(), Some(4));
        assert_eq!(min_separator(&g, &l, 2).unwrap(), SeparatorOutcome::Exceeded);
    }

    #[test]
    fn irregular_terminals_rejected() {
        let g = SkewGraph::from_raw(1, &[]).unwrap();
        assert!(min_separator(&g, &set(&g, &[1, -1]), 1).is_err());
    }

    #[test]
    fn single_path_layers() {
        // 1 -> 2 -> -3 with conjugate -> 3 -> -2 -> -1; L = {1, 3}
        let g = SkewGraph::from_raw(3, &[(1, 2), (2, -3)]).unwrap();
        let l = set(&g, &[1, 3]);
        let lambda = separator_size(&g, &l, 4).unwrap().unwrap();
        let c = separator_collection(&g, &l, lambda).unwrap();
        for (i, b) in c.boundaries.iter().enumerate() {
            assert_eq!(b.len(), lambda);
            assert_eq!(g.out_boundary(&c.prefix(3, i)), *b);
        }
        assert!(c.len() >= 2);
    }

    #[test]
    fn pair_test_examples() {
        let g = SkewGraph::from_raw(1, &[(1, -1)]).unwrap();
        let l = set(&g, &[1]);
        assert!(has_min_separator_with_pair(&g, &l, ArcId(0), 2).unwrap());

        let g = SkewGraph::from_raw(3, &[(1, -1), (2, 3)]).unwrap();
        let l = set(&g, &[1]);
        assert!(!has_min_separator_with_pair(&g, &l, ArcId(2), 2).unwrap());
    }

    #[test]
    fn zero_lambda_collection_is_contract_error() {
        let g = SkewGraph::from_raw(1, &[]).unwrap();
        assert!(separator_collection(&g, &set(&g, &[1]), 0).is_err());
    }
}
