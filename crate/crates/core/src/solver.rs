//! Branching search for skew-symmetric multicuts.
//!
//! Every search node carries a regular terminal set `L` and a budget `k`
//! (conjugate arc pairs still deletable). Progress is measured by
//! `μ = 2k − λ(L, L')`, which drops by at least one along every branch and is
//! left unchanged when a forced arc pair is deleted.

use serde::Serialize;

use crate::components::{find_lk_component_with_stats, ComponentOutcome, ComponentStats};
use crate::error::{contract, internal, Error, Result};
use crate::graph::{ArcId, ArcSet, SkewGraph, VertexId, VertexSet};
use crate::separators::{separator_size, separator_with_pair};

/// Finds a family member whose vertices all share a strongly connected
/// component with their conjugates.
pub trait ViolationOracle {
    /// Largest member size `d`.
    fn arity(&self) -> usize;

    /// A violated member in the graph with its current deletions, if any.
    fn find_violated(&mut self, g: &SkewGraph) -> Option<Vec<VertexId>>;

    /// Checks that the oracle refers only to vertices of `g`.
    fn validate(&self, _g: &SkewGraph) -> Result<()> {
        Ok(())
    }
}

/// An explicitly listed family of vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFamily {
    sets: Vec<Vec<VertexId>>,
    arity: usize,
}

impl ExplicitFamily {
    pub fn new(sets: Vec<Vec<VertexId>>) -> Result<Self> {
        if let Some(i) = sets.iter().position(|s| s.is_empty()) {
            return Err(Error::Malformed(format!("family member {i} is empty")));
        }
        let arity = sets.iter().map(Vec::len).max().unwrap_or(0);
        Ok(ExplicitFamily { sets, arity })
    }

    pub fn sets(&self) -> &[Vec<VertexId>] {
        &self.sets
    }
}

impl ViolationOracle for ExplicitFamily {
    fn arity(&self) -> usize {
        self.arity
    }

    fn find_violated(&mut self, g: &SkewGraph) -> Option<Vec<VertexId>> {
        if self.sets.is_empty() {
            return None;
        }
        let scc = g.scc_labels();
        self.sets
            .iter()
            .find(|set| set.iter().all(|&v| scc.conflicted(v)))
            .cloned()
    }

    fn validate(&self, g: &SkewGraph) -> Result<()> {
        for (i, set) in self.sets.iter().enumerate() {
            if let Some(v) = set.iter().find(|v| v.pair() >= g.n_pairs()) {
                return Err(Error::Malformed(format!(
                    "family member {i} names vertex {v}, outside ±1..±{}",
                    g.n_pairs()
                )));
            }
        }
        Ok(())
    }
}

/// A self-conjugate arc set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multicut {
    pub arcs: ArcSet,
}

impl Multicut {
    /// One representative per conjugate pair (the even arc), ascending.
    pub fn pairs(&self) -> Vec<ArcId> {
        self.arcs.pairs()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Multicut),
    Infeasible,
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Solution(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub leaves: u64,
    pub rule_applications: u64,
    pub max_depth: u64,
    pub component_calls: u64,
    pub component_extensions: u64,
    pub oracle_calls: u64,
    /// `μ` at the root.
    pub root_measure: u64,
}

/// True iff `s` is self-conjugate and every member of `family` has a vertex
/// separated from its conjugate in `g ∖ s`.
pub fn validate_multicut(g: &SkewGraph, family: &[Vec<VertexId>], s: &ArcSet) -> bool {
    if s.len() > g.n_arcs() || s.iter().any(|a| a.index() >= g.n_arcs()) {
        return false;
    }
    if !s.symmetry().self_conjugate {
        return false;
    }
    let mut h = g.clone();
    for a in s.iter() {
        h.delete_pair(a);
    }
    let scc = h.scc_labels();
    family
        .iter()
        .all(|set| set.iter().any(|&v| v.pair() < g.n_pairs() && !scc.conflicted(v)))
}

/// Picks the pair forced by an irregular minimum separator: the first pair
/// `y, σ(y)` on the boundary of `R(L, S ∪ σ(S))`.
pub fn apply_reduction_rule(g: &SkewGraph, terminals: &VertexSet, s: &ArcSet) -> Result<(ArcId, ArcId)> {
    if terminals.is_empty() {
        return Err(contract!("the reduction rule needs a nonempty terminal set"));
    }
    if s.symmetry().regular {
        return Err(contract!("the reduction rule needs an irregular separator"));
    }
    let z = g.reachable(terminals, Some(&s.symmetric_closure()));
    let out = g.out_boundary(&z);
    let boundary = ArcSet::from_arcs(g.n_arcs(), out.iter().copied());
    out.iter()
        .find(|&&a| boundary.contains(a.conjugate()))
        .map(|&a| (a, a.conjugate()))
        .ok_or_else(|| internal!("no conjugate pair on the boundary of R(L, S ∪ S')"))
}

pub fn solve(g: &SkewGraph, oracle: &mut dyn ViolationOracle, k: usize) -> Result<SolveOutcome> {
    solve_with_stats(g, oracle, k).map(|(outcome, _)| outcome)
}

struct Frame {
    /// Representatives of the arc pairs deleted on the way to this node.
    deleted: Vec<ArcId>,
    terminals: VertexSet,
    k: usize,
    lambda: usize,
    depth: u64,
}

fn measure(k: usize, lambda: usize) -> usize {
    2 * k - lambda
}

struct Budget {
    leaves: u128,
    nodes: u128,
}

impl Budget {
    fn new(d: usize, mu: usize) -> Self {
        let branching = (2 * d.max(1)) as u128;
        let mut power: u128 = 1;
        let mut sum: u128 = 1;
        for _ in 0..mu {
            power = power.saturating_mul(branching);
            sum = sum.saturating_add(power);
        }
        Budget { leaves: power, nodes: sum }
    }
}

/// Runs the branching search and reports counters alongside the outcome.
pub fn solve_with_stats(
    g: &SkewGraph,
    oracle: &mut dyn ViolationOracle,
    k: usize,
) -> Result<(SolveOutcome, SolveStats)> {
    g.validate()?;
    oracle.validate(g)?;
    let mut stats = SolveStats {
        root_measure: (2 * k) as u64,
        ..SolveStats::default()
    };
    let budget = Budget::new(oracle.arity(), 2 * k);
    let mut comp_stats = ComponentStats::default();
    let base_mask = g.deleted_arcs();
    let mut work = g.clone();

    let mut stack = vec![Frame {
        deleted: Vec::new(),
        terminals: VertexSet::for_graph(g),
        k,
        lambda: 0,
        depth: 0,
    }];

    let result = loop {
        let Some(mut frame) = stack.pop() else {
            break SolveOutcome::Infeasible;
        };
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(frame.depth);
        if u128::from(stats.nodes) > budget.nodes {
            return Err(internal!(
                "search tree exceeded its node budget of {} at measure {}",
                budget.nodes,
                2 * k
            ));
        }
        work.set_deleted(&base_mask)?;
        for &a in &frame.deleted {
            work.delete_pair(a);
        }
        match expand(&mut work, oracle, &mut frame, &mut stats, &mut comp_stats)? {
            Expansion::Solved => {
                stats.leaves += 1;
                let mut arcs = ArcSet::for_graph(g);
                for &a in &frame.deleted {
                    arcs.insert_pair(a);
                }
                break SolveOutcome::Solution(Multicut { arcs });
            }
            Expansion::Dead => stats.leaves += 1,
            Expansion::Children(children) => {
                if children.is_empty() {
                    stats.leaves += 1;
                }
                let parent_mu = measure(frame.k, frame.lambda);
                for child in children.into_iter().rev() {
                    if measure(child.k, child.lambda) >= parent_mu {
                        return Err(internal!(
                            "branch did not lower the measure ({} -> {})",
                            parent_mu,
                            measure(child.k, child.lambda)
                        ));
                    }
                    stack.push(child);
                }
            }
        }
        if u128::from(stats.leaves) > budget.leaves {
            return Err(internal!("search tree exceeded its leaf budget of {}", budget.leaves));
        }
    };

    stats.component_calls = comp_stats.calls;
    stats.component_extensions = comp_stats.extensions;
    if let SolveOutcome::Solution(cut) = &result {
        if cut.arcs.len() > 2 * k || !cut.arcs.symmetry().self_conjugate {
            return Err(internal!("solution has {} arcs for budget {k}", cut.arcs.len()));
        }
        let mut check = g.clone();
        for a in cut.arcs.iter() {
            check.delete_pair(a);
        }
        stats.oracle_calls += 1;
        if oracle.find_violated(&check).is_some() {
            return Err(internal!("returned multicut leaves a violated set"));
        }
    }
    Ok((result, stats))
}

enum Expansion {
    Solved,
    Dead,
    Children(Vec<Frame>),
}

/// Processes one node: applies forced deletions until a branching step is
/// reached, then returns the children in exploration order.
fn expand(
    work: &mut SkewGraph,
    oracle: &mut dyn ViolationOracle,
    frame: &mut Frame,
    stats: &mut SolveStats,
    comp_stats: &mut ComponentStats,
) -> Result<Expansion> {
    loop {
        let mu = measure(frame.k, frame.lambda);
        if frame.terminals.is_empty() || frame.lambda == 0 {
            stats.oracle_calls += 1;
            let Some(violated) = oracle.find_violated(work) else {
                return Ok(Expansion::Solved);
            };
            if violated.is_empty() || violated.len() > oracle.arity().max(1) {
                return Err(internal!("oracle returned a set of size {}", violated.len()));
            }
            let mut children = Vec::new();
            let candidates = violated.iter().copied().chain(violated.iter().map(|v| v.conjugate()));
            for v in candidates {
                let terminals = VertexSet::from_vertices(work.n_pairs(), [v]);
                let Some(lambda) = separator_size(work, &terminals, 2 * frame.k)? else {
                    continue;
                };
                if lambda == 0 {
                    return Err(internal!("vertex {v} of a violated set cannot reach its conjugate"));
                }
                children.push(Frame {
                    deleted: frame.deleted.clone(),
                    terminals,
                    k: frame.k,
                    lambda,
                    depth: frame.depth + 1,
                });
            }
            return Ok(Expansion::Children(children));
        }

        let outcome = find_lk_component_with_stats(work, &frame.terminals, frame.k, comp_stats)?;
        let forced = match outcome {
            ComponentOutcome::NoComponent => return Ok(Expansion::Dead),
            ComponentOutcome::IrregularSeparator { arcs, lambda } => {
                if lambda != frame.lambda {
                    return Err(internal!("component search saw λ = {lambda}, node has {}", frame.lambda));
                }
                Some(arcs)
            }
            ComponentOutcome::Component { set, lambda } => {
                if lambda != frame.lambda {
                    return Err(internal!("component search saw λ = {lambda}, node has {}", frame.lambda));
                }
                let boundary = work.out_boundary(&set);
                let boundary_set = ArcSet::from_arcs(work.n_arcs(), boundary.iter().copied());
                let mut forced = None;
                if !boundary_set.symmetry().regular {
                    forced = Some(boundary_set);
                } else {
                    for &a in &boundary {
                        if let Some(cut) = separator_with_pair(work, &frame.terminals, a, lambda)? {
                            forced = Some(cut);
                            break;
                        }
                    }
                }
                if forced.is_none() {
                    return branch_on_boundary(work, frame, &set, &boundary);
                }
                forced
            }
        };

        let separator = forced.expect("forced separator present");
        let (y, _) = apply_reduction_rule(work, &frame.terminals, &separator)?;
        work.delete_pair(y);
        frame.deleted.push(ArcId::from_pair(y.pair()));
        frame.k -= 1;
        stats.rule_applications += 1;
        let Some(lambda) = separator_size(work, &frame.terminals, 2 * frame.k)? else {
            return Err(internal!("separator value grew after deleting a forced pair"));
        };
        if lambda + 2 != frame.lambda {
            return Err(internal!(
                "deleting a forced pair changed λ from {} to {lambda}",
                frame.lambda
            ));
        }
        frame.lambda = lambda;
        if measure(frame.k, frame.lambda) != mu {
            return Err(internal!("forced deletion changed the measure"));
        }
    }
}

fn branch_on_boundary(
    work: &mut SkewGraph,
    frame: &Frame,
    z: &VertexSet,
    boundary: &[ArcId],
) -> Result<Expansion> {
    let Some(&a) = boundary.first() else {
        return Err(internal!("component has an empty boundary while λ > 0"));
    };
    let mut children = Vec::new();

    if frame.k >= 1 {
        let lambda = separator_size_after_delete(work, &frame.terminals, a, frame.lambda)?;
        if lambda + 1 < frame.lambda {
            return Err(internal!("deleting one boundary pair dropped λ by more than one"));
        }
        if boundary.len() == 1 && lambda >= frame.lambda {
            return Err(internal!("deleting the only boundary arc did not lower λ"));
        }
        if lambda <= 2 * (frame.k - 1) {
            let mut deleted = frame.deleted.clone();
            deleted.push(ArcId::from_pair(a.pair()));
            children.push(Frame {
                deleted,
                terminals: frame.terminals.clone(),
                k: frame.k - 1,
                lambda,
                depth: frame.depth + 1,
            });
        }
    }

    let head = work.head(a);
    if !z.contains(head.conjugate()) {
        let mut terminals = z.clone();
        terminals.insert(head);
        if let Some(lambda) = separator_size(work, &terminals, 2 * frame.k)? {
            if lambda <= frame.lambda {
                return Err(internal!(
                    "absorbing the head of a boundary arc kept λ at {lambda} (was {})",
                    frame.lambda
                ));
            }
            children.push(Frame {
                deleted: frame.deleted.clone(),
                terminals,
                k: frame.k,
                lambda,
                depth: frame.depth + 1,
            });
        }
    }
    Ok(Expansion::Children(children))
}

/// `λ(L, L')` after deleting the pair of `a`, which is at most `current`.
fn separator_size_after_delete(work: &mut SkewGraph, terminals: &VertexSet, a: ArcId, current: usize) -> Result<usize> {
    work.delete_pair(a);
    let lambda = separator_size(work, terminals, current);
    work.restore_pair(a);
    lambda?.ok_or_else(|| internal!("deleting an arc pair raised the separator value"))
}
