//! Exhaustive reference solvers for small instances.
//!
//! None of these use the flow, component or solver machinery: reachability is
//! a bitmask transitive closure, satisfiability is a truth table and
//! bipartiteness is tested against every 2-colouring. Each routine refuses
//! inputs beyond its budget rather than running unboundedly. Witnesses are
//! minimum-size and lexicographically first among those.

use crate::error::{Error, Result};
use crate::graph::{ArcSet, SkewGraph, VertexId};
use crate::reductions::{CnfFormula, UndirectedGraph};

/// Size limits of the exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertex_pairs: usize,
    pub max_arc_pairs: usize,
    pub max_vars: usize,
    pub max_clauses: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_k: usize,
}

pub const MULTICUT_BUDGET: OracleBudget = OracleBudget {
    max_vertex_pairs: 32,
    max_arc_pairs: 32,
    max_vars: 0,
    max_clauses: 0,
    max_vertices: 0,
    max_edges: 0,
    max_k: 4,
};

pub const ALMOST_2SAT_BUDGET: OracleBudget = OracleBudget {
    max_vertex_pairs: 0,
    max_arc_pairs: 0,
    max_vars: 20,
    max_clauses: 16,
    max_vertices: 0,
    max_edges: 0,
    max_k: 4,
};

pub const BIPARTIZATION_BUDGET: OracleBudget = OracleBudget {
    max_vertex_pairs: 0,
    max_arc_pairs: 0,
    max_vars: 0,
    max_clauses: 0,
    max_vertices: 12,
    max_edges: 40,
    max_k: 4,
};

/// `max_vars` counts variables that actually occur.
pub const QHORN_BUDGET: OracleBudget = OracleBudget {
    max_vertex_pairs: 0,
    max_arc_pairs: 0,
    max_vars: 10,
    max_clauses: 64,
    max_vertices: 0,
    max_edges: 0,
    max_k: 3,
};

fn refuse(what: &str, value: usize, limit: usize) -> Error {
    Error::BudgetExceeded(format!("{what} = {value} exceeds the limit of {limit}"))
}

fn check(what: &str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(refuse(what, value, limit))
    } else {
        Ok(())
    }
}

/// Calls `visit` on every subset of `0..n` with at most `k` elements, by size
/// and then lexicographically, until it returns true.
fn first_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    for size in 0..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if visit(&idx) {
                return Some(idx);
            }
            let Some(pos) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
                break;
            };
            idx[pos] += 1;
            for j in pos + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// Exhaustive skew-symmetric multicut: the first set of at most `k` undeleted
/// arc pairs after whose removal every family member has a vertex that does
/// not reach its conjugate in both directions.
pub fn bf_multicut(g: &SkewGraph, family: &[Vec<VertexId>], k: usize) -> Result<Option<ArcSet>> {
    let b = MULTICUT_BUDGET;
    check("vertex pairs", g.n_pairs(), b.max_vertex_pairs)?;
    check("k", k, b.max_k)?;
    let pairs: Vec<usize> = (0..g.n_arc_pairs())
        .filter(|&p| g.is_active(crate::graph::ArcId::from_pair(p)))
        .collect();
    check("arc pairs", pairs.len(), b.max_arc_pairs)?;
    let n = g.n_vertices();
    let arcs: Vec<(usize, usize, usize)> = g
        .arcs()
        .filter(|&a| g.is_active(a))
        .map(|a| (a.pair(), g.tail(a).index(), g.head(a).index()))
        .collect();
    let members: Vec<Vec<usize>> = family
        .iter()
        .map(|s| s.iter().map(|v| v.index()).collect())
        .collect();
    if members.iter().flatten().any(|&v| v >= n) {
        return Err(Error::Malformed("family names a vertex outside the graph".into()));
    }

    let found = first_subset(pairs.len(), k, |chosen| {
        let removed: Vec<usize> = chosen.iter().map(|&i| pairs[i]).collect();
        let mut reach = vec![0u64; n];
        for (v, r) in reach.iter_mut().enumerate() {
            *r |= 1 << v;
        }
        for &(p, u, v) in &arcs {
            if !removed.contains(&p) {
                reach[u] |= 1 << v;
            }
        }
        for m in 0..n {
            for i in 0..n {
                if reach[i] >> m & 1 == 1 {
                    reach[i] |= reach[m];
                }
            }
        }
        let conflicted = |v: usize| reach[v] >> (v ^ 1) & 1 == 1 && reach[v ^ 1] >> v & 1 == 1;
        members.iter().all(|set| set.iter().any(|&v| !conflicted(v)))
    });
    Ok(found.map(|chosen| {
        let mut s = ArcSet::for_graph(g);
        for i in chosen {
            s.insert_pair(crate::graph::ArcId::from_pair(pairs[i]));
        }
        s
    }))
}

/// Exhaustive Almost 2-SAT by truth tables: the first set of at most `k`
/// clause indices whose removal leaves a satisfiable formula.
pub fn bf_almost2sat(f: &CnfFormula, k: usize) -> Result<Option<Vec<usize>>> {
    let b = ALMOST_2SAT_BUDGET;
    check("variables", f.n_vars(), b.max_vars)?;
    check("clauses", f.n_clauses(), b.max_clauses)?;
    check("k", k, b.max_k)?;
    let n = f.n_vars();
    let mut masks: Vec<u32> = Vec::new();
    for bits in 0u32..(1 << n) {
        let mut violated = 0u32;
        for (i, c) in f.clauses().iter().enumerate() {
            let sat = c
                .iter()
                .any(|&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0));
            if !sat {
                violated |= 1 << i;
            }
        }
        if violated.count_ones() as usize <= k {
            masks.push(violated);
        }
    }
    masks.sort_unstable();
    masks.dedup();
    Ok(first_subset(f.n_clauses(), k, |chosen| {
        let s: u32 = chosen.iter().map(|&i| 1u32 << i).sum();
        masks.iter().any(|&m| m & !s == 0)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BipartizationMode {
    Vertex,
    Edge,
}

fn two_colourable(n: usize, edges: &[(usize, usize)], skip_vertex: u32, skip_edge: u64) -> bool {
    (0u32..1 << n).any(|colouring| {
        edges.iter().enumerate().all(|(i, &(u, v))| {
            skip_edge >> i & 1 == 1
                || skip_vertex >> (u - 1) & 1 == 1
                || skip_vertex >> (v - 1) & 1 == 1
                || (colouring >> (u - 1) & 1) != (colouring >> (v - 1) & 1)
        })
    })
}

/// Exhaustive odd cycle transversal (vertex mode, 1-based vertices) or edge
/// bipartization (edge mode, zero-based edge indices).
pub fn bf_bipartization(g: &UndirectedGraph, k: usize, mode: BipartizationMode) -> Result<Option<Vec<usize>>> {
    let b = BIPARTIZATION_BUDGET;
    check("vertices", g.n_vertices(), b.max_vertices)?;
    check("edges", g.edges().len(), b.max_edges)?;
    check("k", k, b.max_k)?;
    let n = g.n_vertices();
    let edges = g.edges();
    Ok(match mode {
        BipartizationMode::Vertex => first_subset(n, k, |chosen| {
            let skip: u32 = chosen.iter().map(|&i| 1u32 << i).sum();
            two_colourable(n, edges, skip, 0)
        })
        .map(|s| s.into_iter().map(|i| i + 1).collect()),
        BipartizationMode::Edge => first_subset(edges.len(), k, |chosen| {
            let skip: u64 = chosen.iter().map(|&i| 1u64 << i).sum();
            two_colourable(n, edges, 0, skip)
        }),
    })
}

fn occurring_variables(f: &CnfFormula) -> Vec<usize> {
    let mut vars: Vec<usize> = f
        .clauses()
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs() as usize)
        .collect();
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// q-Horn test by enumerating every weighting `β(x) ∈ {0, ½, 1}` with
/// `β(¬x) = 1 − β(x)` and checking that each clause weighs at most 1.
/// Clauses with complementary literals are skipped.
pub fn bf_qhorn(f: &CnfFormula) -> Result<bool> {
    let b = QHORN_BUDGET;
    let vars = occurring_variables(f);
    check("occurring variables", vars.len(), b.max_vars)?;
    check("clauses", f.n_clauses(), b.max_clauses)?;
    let position = |x: usize| vars.binary_search(&x).expect("variable occurs");
    let clauses: Vec<Vec<(usize, bool)>> = f
        .clauses()
        .iter()
        .map(|c| {
            let mut lits: Vec<(usize, bool)> = c.iter().map(|&l| (position(l.unsigned_abs() as usize), l > 0)).collect();
            lits.sort_unstable();
            lits.dedup();
            lits
        })
        .filter(|lits| lits.windows(2).all(|w| w[0].0 != w[1].0))
        .collect();
    // Weights are doubled: 0, 1, 2 stand for 0, ½, 1.
    let total = 3usize.pow(vars.len() as u32);
    let mut weight = vec![0u32; vars.len()];
    for code in 0..total {
        let mut c = code;
        for w in weight.iter_mut() {
            *w = (c % 3) as u32;
            c /= 3;
        }
        let ok = clauses.iter().all(|clause| {
            clause
                .iter()
                .map(|&(x, positive)| if positive { weight[x] } else { 2 - weight[x] })
                .sum::<u32>()
                <= 2
        });
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The first set of at most `k` occurring variables whose deletion leaves a
/// q-Horn formula. Tautological clauses are discarded before deleting.
pub fn bf_qhorn_backdoor(f: &CnfFormula, k: usize) -> Result<Option<Vec<usize>>> {
    check("k", k, QHORN_BUDGET.max_k)?;
    let clauses = f
        .clauses()
        .iter()
        .filter(|c| !c.iter().any(|l| c.contains(&-l)))
        .cloned()
        .collect();
    let f = &CnfFormula::new(f.n_vars(), clauses)?;
    let vars = occurring_variables(f);
    check("occurring variables", vars.len(), QHORN_BUDGET.max_vars)?;
    let mut failure = None;
    let found = first_subset(vars.len(), k, |chosen| {
        let removed: Vec<usize> = chosen.iter().map(|&i| vars[i]).collect();
        match bf_qhorn(&f.without_variables(&removed)) {
            Ok(yes) => yes,
            Err(e) => {
                failure = Some(e);
                true
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(found.map(|chosen| chosen.into_iter().map(|i| vars[i]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        first_subset(3, 2, |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
    }

    #[test]
    fn multicut_examples() {
        let g = SkewGraph::from_raw(1, &[(1, -1), (-1, 1)]).unwrap();
        let v1 = VertexId::new(1).unwrap();
        assert_eq!(bf_multicut(&g, &[], 0).unwrap().map(|s| s.len()), Some(0));
        let s = bf_multicut(&g, &[vec![v1]], 1).unwrap().unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(bf_multicut(&g, &[vec![v1]], 0).unwrap(), None);
    }

    #[test]
    fn almost2sat_examples() {
        assert_eq!(bf_almost2sat(&cnf(2, &[&[1, 2]]), 0).unwrap(), Some(vec![]));
        assert_eq!(bf_almost2sat(&cnf(1, &[&[1], &[-1]]), 1).unwrap(), Some(vec![0]));
        let all = cnf(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        assert_eq!(bf_almost2sat(&all, 0).unwrap(), None);
        assert_eq!(bf_almost2sat(&all, 1).unwrap(), Some(vec![0]));
    }

    #[test]
    fn bipartization_examples() {
        let triangle = UndirectedGraph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(bf_bipartization(&triangle, 3, BipartizationMode::Vertex).unwrap(), Some(vec![1]));
        let k4 = UndirectedGraph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(bf_bipartization(&k4, 4, BipartizationMode::Edge).unwrap().map(|s| s.len()), Some(2));
        let path = UndirectedGraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        assert_eq!(bf_bipartization(&path, 2, BipartizationMode::Vertex).unwrap(), Some(vec![]));
    }

    #[test]
    fn qhorn_examples() {
        assert!(bf_qhorn(&cnf(3, &[&[-1, -2, 3], &[-3]])).unwrap());
        assert!(bf_qhorn(&cnf(3, &[&[1, 2], &[2, 3], &[1, 3]])).unwrap());
        let nq = cnf(3, &[&[1, 2, 3], &[-1, -2], &[-2, -3], &[-1, -3], &[1, 2], &[2, 3], &[1, 3]]);
        assert!(!bf_qhorn(&nq).unwrap());
        assert_eq!(bf_qhorn_backdoor(&nq, 1).unwrap(), Some(vec![1]));
        assert_eq!(bf_qhorn_backdoor(&nq, 0).unwrap(), None);
    }

    #[test]
    fn budgets_are_enforced() {
        let big = cnf(21, &[&[1, 2]]);
        assert!(matches!(bf_almost2sat(&big, 1), Err(Error::BudgetExceeded(_))));
    }
}
