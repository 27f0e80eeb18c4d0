//! Edge bipartization and odd cycle transversal.
//!
//! A 2-colouring is a truth assignment with one variable per vertex, and an
//! edge `uv` is properly coloured iff both `{x_u, x_v}` and `{¬x_u, ¬x_v}`
//! hold. Edge deletion maps to clause deletion directly. Vertex deletion maps
//! to cutting a literal vertex, which is made an arc by splitting every
//! literal into an in-half and an out-half.

use std::collections::VecDeque;

use crate::error::{internal, Error, Result};
use crate::graph::{SkewGraph, VertexId};
use crate::reductions::cnf::{almost_2sat_with_stats, CnfFormula};
use crate::solver::{solve_with_stats, ExplicitFamily, SolveOutcome, SolveStats};

/// A simple undirected multigraph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n > (i32::MAX / 4) as usize {
            return Err(Error::Malformed(format!("too many vertices: {n}")));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Malformed(format!("edge {} = ({u}, {v}) is outside 1..{n}", i + 1)));
            }
            if u == v {
                return Err(Error::Malformed(format!("edge {} is a self-loop at {u}", i + 1)));
            }
        }
        Ok(UndirectedGraph { n, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// True iff the graph minus the given vertices and edge indices is bipartite.
    pub fn is_bipartite_without(&self, vertices: &[usize], edges: &[usize]) -> bool {
        let mut adj = vec![Vec::new(); self.n + 1];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if edges.contains(&i) || vertices.contains(&u) || vertices.contains(&v) {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut colour = vec![None; self.n + 1];
        for start in 1..=self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let c = colour[u].expect("queued vertices are coloured");
                for &w in &adj[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    pub fn is_bipartite(&self) -> bool {
        self.is_bipartite_without(&[], &[])
    }
}

/// The two clauses of edge `e` sit at indices `2e` and `2e + 1`.
pub fn edge_clauses(g: &UndirectedGraph) -> CnfFormula {
    let clauses = g
        .edges
        .iter()
        .flat_map(|&(u, v)| {
            let (u, v) = (u as i32, v as i32);
            [vec![u, v], vec![-u, -v]]
        })
        .collect();
    CnfFormula::new(g.n, clauses).expect("edge endpoints are in range")
}

/// At most `k` edges whose removal leaves `g` bipartite (zero-based edge indices).
pub fn edge_bipartization(g: &UndirectedGraph, k: usize) -> Result<Option<Vec<usize>>> {
    edge_bipartization_with_stats(g, k).map(|(s, _)| s)
}

pub fn edge_bipartization_with_stats(g: &UndirectedGraph, k: usize) -> Result<(Option<Vec<usize>>, SolveStats)> {
    let (clauses, stats) = almost_2sat_with_stats(&edge_clauses(g), k)?;
    let Some(clauses) = clauses else {
        return Ok((None, stats));
    };
    let mut edges: Vec<usize> = clauses.iter().map(|c| c / 2).collect();
    edges.dedup();
    if edges.len() > k || !g.is_bipartite_without(&[], &edges) {
        return Err(internal!("edge set {edges:?} does not bipartize the graph"));
    }
    Ok((Some(edges), stats))
}

/// In-half of a split literal of variable `x`.
pub(crate) fn split_in(lit: i32) -> VertexId {
    let x = lit.abs();
    VertexId::new(if lit > 0 { 2 * x - 1 } else { -2 * x }).expect("nonzero")
}

/// Out-half of a split literal; `σ(in(l)) = out(¬l)`.
pub(crate) fn split_out(lit: i32) -> VertexId {
    let x = lit.abs();
    VertexId::new(if lit > 0 { 2 * x } else { -(2 * x - 1) }).expect("nonzero")
}

/// The split implication graph used for vertex deletion. Arc pair `u - 1` is
/// the internal pair of vertex `u`; every clause arc pair follows, repeated
/// `k + 1` times so that no solution within budget can remove all copies.
pub fn oct_gadget(g: &UndirectedGraph, k: usize) -> Result<SkewGraph> {
    let mut pairs: Vec<(VertexId, VertexId)> = (1..=g.n as i32).map(|u| (split_in(u), split_out(u))).collect();
    for &(u, v) in &g.edges {
        let (u, v) = (u as i32, v as i32);
        for _ in 0..=k {
            pairs.push((split_out(-u), split_in(v)));
            pairs.push((split_out(u), split_in(-v)));
        }
    }
    SkewGraph::build(2 * g.n, &pairs)
}

/// At most `k` vertices whose removal leaves `g` bipartite.
pub fn oct(g: &UndirectedGraph, k: usize) -> Result<Option<Vec<usize>>> {
    oct_with_stats(g, k).map(|(s, _)| s)
}

pub fn oct_with_stats(g: &UndirectedGraph, k: usize) -> Result<(Option<Vec<usize>>, SolveStats)> {
    let gadget = oct_gadget(g, k)?;
    let family = (1..=g.n as i32).map(|u| vec![split_out(u)]).collect();
    let mut oracle = ExplicitFamily::new(family)?;
    let (outcome, stats) = solve_with_stats(&gadget, &mut oracle, k)?;
    let SolveOutcome::Solution(cut) = outcome else {
        return Ok((None, stats));
    };
    let vertices: Vec<usize> = cut
        .pairs()
        .iter()
        .map(|a| a.pair())
        .filter(|&p| p < g.n)
        .map(|p| p + 1)
        .collect();
    if vertices.len() > k || !g.is_bipartite_without(&vertices, &[]) {
        return Err(internal!("vertex set {vertices:?} does not bipartize the graph"));
    }
    Ok((Some(vertices), stats))
}
