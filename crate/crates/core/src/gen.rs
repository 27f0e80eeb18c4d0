//! Reproducible random instances.
//!
//! All randomness comes from SplitMix64. Starting from `state = seed`, each
//! draw adds `0x9E3779B97F4A7C15` to the state (wrapping) and mixes it:
//!
//! ```text
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! A bounded integer in `0..n` is the high word of the 128-bit product
//! `draw * n`; a real in `[0, 1)` is `(draw >> 11) / 2^53`. The generators below
//! consume draws in exactly the order documented on each function, so other
//! implementations can reproduce a corpus bit for bit.

use crate::formats::SsmcInstance;
use crate::graph::VertexId;
use crate::reductions::{CnfFormula, UndirectedGraph};

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn coin(&mut self) -> bool {
        self.below(2) == 1
    }

    /// Uniform signed vertex among `±1..±n_pairs`, by vertex index.
    fn vertex(&mut self, n_pairs: usize) -> VertexId {
        VertexId::from_index(self.below(2 * n_pairs as u64) as usize)
    }
}

/// Random multicut instance.
///
/// Per arc pair: tail index `t = below(2·pairs)`, then head index
/// `h = below(2·pairs − 1)`, bumped by one if `h ≥ t` (no loops). Per family
/// set: size `1 + below(min(d, 2·pairs))`, then vertices drawn like tails, a repeated
/// vertex being redrawn. Vertex index `i` is `+(i/2 + 1)` if `i` is even and
/// `−(i/2 + 1)` otherwise. Requires `pairs ≥ 1` and `d ≥ 1`.
pub fn ssmc(seed: u64, pairs: usize, arcs: usize, d: usize, sets: usize, k: usize) -> SsmcInstance {
    assert!(pairs >= 1 && d >= 1, "need at least one vertex pair and d >= 1");
    let mut rng = SplitMix64::new(seed);
    let n = 2 * pairs as u64;
    let arc_list = (0..arcs)
        .map(|_| {
            let tail = rng.below(n);
            let mut head = rng.below(n - 1);
            if head >= tail {
                head += 1;
            }
            (VertexId::from_index(tail as usize), VertexId::from_index(head as usize))
        })
        .collect();
    let size_limit = d.min(2 * pairs);
    let family = (0..sets)
        .map(|_| {
            let size = 1 + rng.below(size_limit as u64) as usize;
            let mut set: Vec<VertexId> = Vec::with_capacity(size);
            while set.len() < size {
                let v = rng.vertex(pairs);
                if !set.contains(&v) {
                    set.push(v);
                }
            }
            set
        })
        .collect();
    SsmcInstance {
        n_pairs: pairs,
        arcs: arc_list,
        k,
        d,
        family,
    }
}

/// Random CNF with `clauses` clauses of exactly `width` distinct variables.
///
/// Per clause, for each position: a variable `1 + below(vars)` (redrawn if
/// already in the clause), then its sign from `coin()` (true is positive).
/// Requires `1 ≤ width ≤ vars`.
pub fn cnf(seed: u64, vars: usize, clauses: usize, width: usize) -> CnfFormula {
    assert!(width >= 1 && width <= vars, "width must be in 1..=vars");
    let mut rng = SplitMix64::new(seed);
    let list = (0..clauses)
        .map(|_| {
            let mut clause: Vec<i32> = Vec::with_capacity(width);
            while clause.len() < width {
                let x = 1 + rng.below(vars as u64) as i32;
                if clause.iter().any(|l| l.abs() == x) {
                    continue;
                }
                clause.push(if rng.coin() { x } else { -x });
            }
            clause
        })
        .collect();
    CnfFormula::new(vars, list).expect("generated literals are in range")
}

/// Erdős–Rényi graph: for `u` in `1..=n` and `v` in `u+1..=n`, in that order,
/// the edge `uv` is kept iff `unit() < p`.
pub fn graph(seed: u64, n: usize, p: f64) -> UndirectedGraph {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.unit() < p {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::new(n, edges).expect("generated edges are simple")
}

/// A 2-CNF that needs exactly two clause deletions.
///
/// A hidden assignment gives variable `x` the value `coin()`, for `x = 1..=vars`
/// in order. Clauses are then drawn like [`cnf`] with width 2, a clause being
/// redrawn until the hidden assignment satisfies it. Finally, for variables 1
/// and 2, both unit clauses `{x}` and `{¬x}` are appended. Requires
/// `vars ≥ 2`.
pub fn planted_almost_2sat(seed: u64, vars: usize, clauses: usize) -> CnfFormula {
    assert!(vars >= 2, "need at least two variables");
    let mut rng = SplitMix64::new(seed);
    let hidden: Vec<bool> = (0..vars).map(|_| rng.coin()).collect();
    let mut list = Vec::with_capacity(clauses + 4);
    while list.len() < clauses {
        let a = 1 + rng.below(vars as u64) as i32;
        let a = if rng.coin() { a } else { -a };
        let b = loop {
            let b = 1 + rng.below(vars as u64) as i32;
            if b != a.abs() {
                break b;
            }
        };
        let b = if rng.coin() { b } else { -b };
        let holds = |l: i32| hidden[l.unsigned_abs() as usize - 1] == (l > 0);
        if holds(a) || holds(b) {
            list.push(vec![a, b]);
        }
    }
    for x in 1..=2 {
        list.push(vec![x]);
        list.push(vec![-x]);
    }
    CnfFormula::new(vars, list).expect("generated literals are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::emit_ssmc;

    #[test]
    fn reference_stream() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn deterministic_ssmc() {
        let a = emit_ssmc(&ssmc(7, 6, 12, 2, 3, 2));
        let b = emit_ssmc(&ssmc(7, 6, 12, 2, 3, 2));
        assert_eq!(a, b);
        let inst = ssmc(7, 6, 12, 2, 3, 2);
        assert_eq!(inst.arcs.len(), 12);
        assert!(inst.arcs.iter().all(|(u, v)| u != v));
        assert!(inst.family.iter().all(|s| !s.is_empty() && s.len() <= 2));
        inst.graph().unwrap().validate().unwrap();
    }

    #[test]
    fn cnf_is_width_two() {
        let f = cnf(1, 5, 9, 2);
        assert_eq!(f.n_clauses(), 9);
        assert!(f.clauses().iter().all(|c| c.len() == 2 && c[0].abs() != c[1].abs()));
    }

    #[test]
    fn graph_is_simple() {
        let g = graph(3, 8, 0.4);
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in g.edges() {
            assert!(u < v);
            assert!(seen.insert((u, v)));
        }
        assert_eq!(graph(3, 8, 0.4), g);
    }

    #[test]
    fn planted_needs_two() {
        let f = planted_almost_2sat(5, 6, 10);
        assert_eq!(f.n_clauses(), 14);
        assert_eq!(crate::brute_force::bf_almost2sat(&f, 1).unwrap(), None);
        assert!(crate::brute_force::bf_almost2sat(&f, 2).unwrap().is_some());
    }
}
