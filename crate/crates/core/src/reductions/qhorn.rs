//! q-Horn recognition and deletion backdoor detection.
//!
//! A formula is q-Horn iff no clause holds three literals that each share a
//! strongly connected component with their negation in the implication graph
//! of its quadratic cover. Deleting a variable is modelled by cutting the
//! literal vertices of that variable, which the split gadget turns into a
//! single deletable arc pair.

use crate::error::{internal, Error, Result};
use crate::graph::{SkewGraph, VertexId};
use crate::reductions::bipartite::{split_in, split_out};
use crate::reductions::cnf::{implication_graph, CnfFormula};
use crate::solver::{solve_with_stats, SolveOutcome, SolveStats, ViolationOracle};

/// The quadratic cover together with the fresh variables introduced per clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticCover {
    pub formula: CnfFormula,
    /// `fresh[c]` lists the chain variables of clause `c`, in order.
    pub fresh: Vec<Vec<usize>>,
}

/// Chains every clause `l₁ ∨ ... ∨ l_w` (literals sorted by variable) through
/// fresh variables `y₁..y_{w-1}`: `{lᵢ, yᵢ}`, `{¬yᵢ, lᵢ₊₁}` and `{¬yᵢ, yᵢ₊₁}`.
pub fn quadratic_cover(f: &CnfFormula) -> Result<QuadraticCover> {
    let mut next = f.n_vars();
    let mut clauses = Vec::new();
    let mut fresh = Vec::with_capacity(f.n_clauses());
    for (i, clause) in f.clauses().iter().enumerate() {
        if clause.is_empty() {
            return Err(Error::Malformed(format!("clause {} is empty", i + 1)));
        }
        let mut lits = clause.clone();
        lits.sort_by_key(|l| l.unsigned_abs());
        let ys: Vec<usize> = (0..lits.len() - 1).map(|j| next + 1 + j).collect();
        next += ys.len();
        for (j, &y) in ys.iter().enumerate() {
            let y = y as i32;
            clauses.push(vec![lits[j], y]);
            clauses.push(vec![-y, lits[j + 1]]);
        }
        for pair in ys.windows(2) {
            clauses.push(vec![-(pair[0] as i32), pair[1] as i32]);
        }
        fresh.push(ys);
    }
    Ok(QuadraticCover {
        formula: CnfFormula::new(next, clauses)?,
        fresh,
    })
}

/// Tested on [`CnfFormula::normalized`]: tautological clauses are satisfied
/// by every assignment and place no constraint.
pub fn is_qhorn(f: &CnfFormula) -> Result<bool> {
    let f = f.normalized();
    let cover = quadratic_cover(&f)?;
    let g = implication_graph(&cover.formula)?;
    let scc = g.scc_labels();
    Ok(f.clauses().iter().all(|c| {
        c.iter()
            .filter(|&&l| scc.conflicted(VertexId::new(l).expect("nonzero")))
            .count()
            < 3
    }))
}

/// Vertex of a cover variable in the gadget: split original variables use
/// pairs `1..=2n`, chain variable `n + j` uses pair `2n + j`.
fn gadget_vertex(lit: i32, n_vars: usize, head: bool) -> VertexId {
    let x = lit.unsigned_abs() as usize;
    if x <= n_vars {
        if head {
            split_in(lit)
        } else {
            split_out(lit)
        }
    } else {
        let id = (n_vars + x) as i32;
        VertexId::new(if lit > 0 { id } else { -id }).expect("nonzero")
    }
}

/// Split implication graph of the quadratic cover. Arc pair `x - 1` is the
/// internal pair of variable `x`; every other arc pair is repeated `k + 1` times.
pub fn qhorn_gadget(f: &CnfFormula, k: usize) -> Result<(SkewGraph, QhornOracle)> {
    let f = &f.normalized();
    let cover = quadratic_cover(f)?;
    let n = f.n_vars();
    let n_pairs = 2 * n + (cover.formula.n_vars() - n);
    let mut pairs: Vec<(VertexId, VertexId)> = (1..=n as i32).map(|x| (split_in(x), split_out(x))).collect();
    for clause in cover.formula.clauses() {
        let (a, b) = (clause[0], clause[1]);
        let tail = gadget_vertex(-a, n, false);
        let head = gadget_vertex(b, n, true);
        for _ in 0..=k {
            pairs.push((tail, head));
        }
    }
    let graph = SkewGraph::build(n_pairs, &pairs)?;
    let oracle = QhornOracle {
        clauses: f.clauses().to_vec(),
    };
    Ok((graph, oracle))
}

/// Reports the out-halves of three conflicted literals of the first clause
/// that has at least three.
#[derive(Clone, Debug)]
pub struct QhornOracle {
    clauses: Vec<Vec<i32>>,
}

impl ViolationOracle for QhornOracle {
    fn arity(&self) -> usize {
        3
    }

    fn find_violated(&mut self, g: &SkewGraph) -> Option<Vec<VertexId>> {
        let scc = g.scc_labels();
        self.clauses.iter().find_map(|c| {
            let hits: Vec<VertexId> = c
                .iter()
                .map(|&l| split_out(l))
                .filter(|&v| scc.conflicted(v))
                .take(3)
                .collect();
            (hits.len() == 3).then_some(hits)
        })
    }
}

/// At most `k` variables whose deletion from the normalized formula leaves a
/// q-Horn formula.
pub fn qhorn_backdoor(f: &CnfFormula, k: usize) -> Result<Option<Vec<usize>>> {
    qhorn_backdoor_with_stats(f, k).map(|(s, _)| s)
}

pub fn qhorn_backdoor_with_stats(f: &CnfFormula, k: usize) -> Result<(Option<Vec<usize>>, SolveStats)> {
    let (graph, mut oracle) = qhorn_gadget(f, k)?;
    let (outcome, stats) = solve_with_stats(&graph, &mut oracle, k)?;
    let SolveOutcome::Solution(cut) = outcome else {
        return Ok((None, stats));
    };
    let vars: Vec<usize> = cut
        .pairs()
        .iter()
        .map(|a| a.pair())
        .filter(|&p| p < f.n_vars())
        .map(|p| p + 1)
        .collect();
    if vars.len() > k || !is_qhorn(&f.normalized().without_variables(&vars))? {
        return Err(internal!("variable set {vars:?} is not a q-Horn deletion backdoor"));
    }
    Ok((Some(vars), stats))
}
