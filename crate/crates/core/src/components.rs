//! `(L, k)`-components: the inclusion-maximal regular supersets `Z` of `L`
//! that are reachable from `L` inside `D[Z]` and keep the minimum separator
//! value `λ(L, L') ≤ 2k`.
//!
//! The search starts from the layered chain of source sides. If every layer
//! is regular the last one is the component. Otherwise the first irregular
//! layer `B` is uncrossed to `Q = B ∖ B'`, the self-conjugate core `B ∩ B'` is
//! cut away, and the search continues from `Q` with the arcs entering the core
//! set aside. Either a component or an irregular minimum separator comes out.

use crate::error::{contract, internal, Result};
use crate::graph::{ArcId, ArcSet, SkewGraph, VertexSet};
use crate::separators::{
    min_separator, separator_collection, separator_size, separator_with_pair, LayeredCollection,
    SeparatorOutcome,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentOutcome {
    /// `λ(L, L') > 2k`.
    NoComponent,
    Component { set: VertexSet, lambda: usize },
    /// A minimum `L`-`L'` separator containing some arc and its conjugate.
    IrregularSeparator { arcs: ArcSet, lambda: usize },
}

/// Counters accumulated across calls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComponentStats {
    pub calls: u64,
    /// Rounds of core removal.
    pub rounds: u64,
    /// Times the maximality check had to grow the computed set.
    pub extensions: u64,
}

pub fn find_lk_component(g: &SkewGraph, terminals: &VertexSet, k: usize) -> Result<ComponentOutcome> {
    find_lk_component_with_stats(g, terminals, k, &mut ComponentStats::default())
}

pub fn find_lk_component_with_stats(
    g: &SkewGraph,
    terminals: &VertexSet,
    k: usize,
    stats: &mut ComponentStats,
) -> Result<ComponentOutcome> {
    stats.calls += 1;
    if terminals.is_empty() {
        return Err(contract!("component search needs a nonempty terminal set"));
    }
    let cap = 2 * k;
    let Some(lambda) = separator_size(g, terminals, cap)? else {
        return Ok(ComponentOutcome::NoComponent);
    };
    if lambda == 0 {
        return Err(contract!("no path from the terminal set to its conjugate"));
    }
    match search(g, terminals, cap, stats)? {
        Found::Separator(arcs) => {
            check_irregular_separator(g, terminals, &arcs, lambda)?;
            Ok(ComponentOutcome::IrregularSeparator { arcs, lambda })
        }
        Found::Candidate(candidate) => {
            let set = finish_component(g, terminals, &candidate, lambda, stats)?;
            Ok(ComponentOutcome::Component { set, lambda })
        }
    }
}

enum Found {
    Candidate(VertexSet),
    Separator(ArcSet),
}

/// Number of leading layers whose prefix is regular.
fn regular_prefix_count(coll: &LayeredCollection, n_pairs: usize) -> usize {
    let mut seen = VertexSet::new(n_pairs);
    for (i, layer) in coll.layer_diffs.iter().enumerate() {
        for &v in layer {
            seen.insert(v);
        }
        if layer.iter().any(|&v| seen.contains(v.conjugate())) {
            return i;
        }
    }
    coll.len()
}

fn with_lifted(g: &SkewGraph, arcs: impl IntoIterator<Item = ArcId>, lifted: &[ArcId]) -> ArcSet {
    ArcSet::from_arcs(g.n_arcs(), arcs.into_iter().chain(lifted.iter().copied()))
}

fn search(g: &SkewGraph, terminals: &VertexSet, cap: usize, stats: &mut ComponentStats) -> Result<Found> {
    let n_pairs = g.n_pairs();
    let mut work = g.clone();
    let mut terms = terminals.clone();
    let mut cap = cap;
    let mut lifted: Vec<ArcId> = Vec::new();

    loop {
        stats.rounds += 1;
        let Some(lambda) = separator_size(&work, &terms, cap)? else {
            return Err(internal!("separator value exceeded the remaining budget {cap}"));
        };
        if lambda == 0 {
            return Ok(Found::Candidate(work.reachable(&terms, None)));
        }
        let coll = separator_collection(&work, &terms, lambda)?;
        let regular = regular_prefix_count(&coll, n_pairs);
        if regular == coll.len() {
            return Ok(Found::Candidate(coll.prefix(n_pairs, coll.len() - 1)));
        }
        if regular == 0 {
            return Err(internal!("the innermost layer is irregular"));
        }
        let a_set = coll.prefix(n_pairs, regular - 1);
        let mut b_set = coll.prefix(n_pairs, regular);
        let b_conj = b_set.conjugate();

        if !a_set.is_disjoint(&b_conj) {
            if a_set.is_subset(&b_conj) {
                return Err(internal!("regular layer lies inside the self-conjugate core"));
            }
            let k_set = b_set.difference(&a_set.conjugate());
            let k_out = work.out_boundary(&k_set);
            if k_out.len() != lambda {
                return Err(internal!("uncrossed layer has out-degree {}, expected {lambda}", k_out.len()));
            }
            if k_set.is_regular() {
                let k_arcs = ArcSet::from_arcs(work.n_arcs(), k_out.iter().copied());
                if !k_arcs.symmetry().regular {
                    return Ok(Found::Separator(with_lifted(g, k_out, &lifted)));
                }
                for &y in &k_out {
                    if let Some(cut) = separator_with_pair(&work, &terms, y, lambda)? {
                        return Ok(Found::Separator(with_lifted(g, cut.iter(), &lifted)));
                    }
                }
                return Err(internal!("no arc of the uncrossed boundary lies in an irregular separator"));
            }
            b_set = k_set;
        }

        let core = b_set.intersection(&b_set.conjugate());
        let q_set = b_set.difference(&core);
        let q_out = work.out_boundary(&q_set);
        if q_out.len() != lambda {
            return Err(internal!("Q has out-degree {}, expected {lambda}", q_out.len()));
        }
        let q_conj = q_set.conjugate();
        if q_out.iter().any(|&a| q_conj.contains(work.head(a))) {
            return Ok(Found::Separator(with_lifted(g, q_out, &lifted)));
        }
        let entering: Vec<ArcId> = q_out.iter().copied().filter(|&a| core.contains(work.head(a))).collect();
        if entering.is_empty() {
            return Err(internal!("no arc from Q enters the self-conjugate core"));
        }
        for &y in &entering {
            if let Some(cut) = separator_with_pair(&work, &terms, y, lambda)? {
                return Ok(Found::Separator(with_lifted(g, cut.iter(), &lifted)));
            }
        }
        for v in core.iter() {
            let incident: Vec<ArcId> = work
                .out_arcs(v)
                .iter()
                .chain(work.in_arcs(v))
                .copied()
                .filter(|&a| work.is_active(a))
                .collect();
            for a in incident {
                work.delete_pair(a);
            }
        }
        cap -= entering.len();
        lifted.extend(entering);
        terms = q_set;
    }
}

fn check_irregular_separator(g: &SkewGraph, terminals: &VertexSet, arcs: &ArcSet, lambda: usize) -> Result<()> {
    if arcs.len() != lambda {
        return Err(internal!("irregular separator has {} arcs, expected {lambda}", arcs.len()));
    }
    if arcs.symmetry().regular {
        return Err(internal!("separator reported as irregular is regular"));
    }
    let reach = g.reachable(terminals, Some(arcs));
    if !reach.is_disjoint(&terminals.conjugate()) {
        return Err(internal!("reported separator leaves a path to the conjugate terminals"));
    }
    Ok(())
}

/// Trims the candidate to what `L` reaches inside it, checks the separator
/// value, and grows it until no boundary head can be absorbed.
fn finish_component(
    g: &SkewGraph,
    terminals: &VertexSet,
    candidate: &VertexSet,
    lambda: usize,
    stats: &mut ComponentStats,
) -> Result<VertexSet> {
    let mut z = g.reachable_within(terminals, candidate);
    if !z.is_regular() {
        return Err(internal!("component candidate is irregular"));
    }
    let out = g.out_boundary(&z);
    if out.len() != lambda {
        return Err(internal!("component candidate has out-degree {}, expected {lambda}", out.len()));
    }
    'grow: loop {
        for a in g.out_boundary(&z) {
            let h = g.head(a);
            if z.contains(h.conjugate()) {
                continue;
            }
            let mut ext = z.clone();
            ext.insert(h);
            if separator_size(g, &ext, lambda)? != Some(lambda) {
                continue;
            }
            let cut = match min_separator(g, &ext, lambda)? {
                SeparatorOutcome::Found(r) => r.cut_arcs,
                SeparatorOutcome::Exceeded => {
                    return Err(internal!("separator value changed between two flow runs"))
                }
            };
            let grown = g.reachable(&ext, Some(&cut.symmetric_closure()));
            if !grown.is_regular() || g.out_boundary(&grown).len() != lambda {
                return Err(internal!("absorbing a boundary head broke the component properties"));
            }
            stats.extensions += 1;
            z = grown;
            continue 'grow;
        }
        return Ok(z);
    }
}
