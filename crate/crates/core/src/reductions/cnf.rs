//! CNF formulas, implication graphs and Almost 2-SAT.

use crate::error::{internal, Error, Result};
use crate::graph::{SkewGraph, VertexId};
use crate::solver::{solve_with_stats, ExplicitFamily, SolveOutcome, SolveStats};

/// A CNF formula over variables `1..=n_vars`; literal `-x` is the negation of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if n_vars > (i32::MAX / 4) as usize {
            return Err(Error::Malformed(format!("too many variables: {n_vars}")));
        }
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Malformed(format!("clause {} is empty", i + 1)));
            }
            if let Some(&lit) = clause.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > n_vars) {
                return Err(Error::Malformed(format!(
                    "clause {} has literal {lit} outside ±1..±{n_vars}",
                    i + 1
                )));
            }
        }
        Ok(CnfFormula { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Total number of literal occurrences.
    pub fn length(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The formula with the clauses at the given (zero-based) indices removed.
    pub fn without_clauses(&self, removed: &[usize]) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, c)| c.clone())
            .collect();
        CnfFormula {
            n_vars: self.n_vars,
            clauses,
        }
    }

    /// `F − B`: every literal of a variable in `vars` is removed and clauses
    /// that become empty are dropped.
    pub fn without_variables(&self, vars: &[usize]) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                c.iter()
                    .copied()
                    .filter(|l| !vars.contains(&(l.unsigned_abs() as usize)))
                    .collect::<Vec<_>>()
            })
            .filter(|c| !c.is_empty())
            .collect();
        CnfFormula {
            n_vars: self.n_vars,
            clauses,
        }
    }

    /// Repeated literals collapsed to their first occurrence and clauses
    /// holding a literal together with its negation dropped.
    pub fn normalized(&self) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.iter().any(|l| c.contains(&-l)))
            .map(|c| {
                let mut out: Vec<i32> = Vec::with_capacity(c.len());
                for &l in c {
                    if !out.contains(&l) {
                        out.push(l);
                    }
                }
                out
            })
            .collect();
        CnfFormula {
            n_vars: self.n_vars,
            clauses,
        }
    }

    /// `assignment[x - 1]` is the value of variable `x`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

pub(crate) fn literal_vertex(lit: i32) -> VertexId {
    VertexId::new(lit).expect("literals are nonzero")
}

fn require_width_two(f: &CnfFormula) -> Result<()> {
    match f.clauses.iter().position(|c| c.len() > 2) {
        Some(i) => Err(Error::Malformed(format!(
            "clause {} has {} literals; at most 2 are allowed here",
            i + 1,
            f.clauses[i].len()
        ))),
        None => Ok(()),
    }
}

/// The implication graph: arc pair `i` is `(¬l₁ → l₂), (¬l₂ → l₁)` for clause
/// `i = {l₁, l₂}`, and a unit clause `{l}` contributes the parallel pair `¬l → l`.
pub fn implication_graph(f: &CnfFormula) -> Result<SkewGraph> {
    require_width_two(f)?;
    let pairs: Vec<(VertexId, VertexId)> = f
        .clauses
        .iter()
        .map(|c| {
            let (a, b) = (c[0], *c.last().expect("clauses are nonempty"));
            (literal_vertex(-a), literal_vertex(b))
        })
        .collect();
    SkewGraph::build(f.n_vars, &pairs)
}

/// Satisfiability of a width-2 formula: no variable shares a strongly
/// connected component of the implication graph with its negation.
pub fn two_sat_satisfiable(f: &CnfFormula) -> Result<bool> {
    let g = implication_graph(f)?;
    let scc = g.scc_labels();
    Ok((1..=f.n_vars as i32).all(|x| !scc.conflicted(literal_vertex(x))))
}

/// Minimum clause deletion to satisfiability, up to `k` clauses. Returns the
/// deleted (zero-based) clause indices.
pub fn almost_2sat(f: &CnfFormula, k: usize) -> Result<Option<Vec<usize>>> {
    almost_2sat_with_stats(f, k).map(|(s, _)| s)
}

pub fn almost_2sat_with_stats(f: &CnfFormula, k: usize) -> Result<(Option<Vec<usize>>, SolveStats)> {
    let g = implication_graph(f)?;
    let family = (1..=f.n_vars as i32).map(|x| vec![literal_vertex(x)]).collect();
    let mut oracle = ExplicitFamily::new(family)?;
    let (outcome, stats) = solve_with_stats(&g, &mut oracle, k)?;
    let SolveOutcome::Solution(cut) = outcome else {
        return Ok((None, stats));
    };
    let removed: Vec<usize> = cut.pairs().iter().map(|a| a.pair()).collect();
    if removed.len() > k || !two_sat_satisfiable(&f.without_clauses(&removed))? {
        return Err(internal!("clause deletion {removed:?} does not leave a satisfiable formula"));
    }
    Ok((Some(removed), stats))
}
