//! Iterative Tarjan over a compressed adjacency list.

pub(crate) struct Csr {
    pub offsets: Vec<usize>,
    pub targets: Vec<usize>,
}

impl Csr {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in edges {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; edges.len()];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        Csr { offsets, targets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Returns `(component count, label per vertex)`. Labels are assigned in the
/// order components are completed, so every edge between distinct components
/// goes from a higher label to a lower one.
pub(crate) fn tarjan(g: &Csr) -> (usize, Vec<usize>) {
    const UNSET: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0usize;
    let mut n_comp = 0usize;

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        calls.push((root, g.offsets[root]));

        while let Some(top) = calls.last_mut() {
            let v = top.0;
            if top.1 < g.offsets[v + 1] {
                let w = g.targets[top.1];
                top.1 += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    calls.push((w, g.offsets[w]));
                } else if comp[w] == UNSET {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(p, _)) = calls.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        comp[w] = n_comp;
                        if w == v {
                            break;
                        }
                    }
                    n_comp += 1;
                }
            }
        }
    }
    (n_comp, comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_tail() {
        // 0 -> 1 -> 2 -> 0, 2 -> 3
        let g = Csr::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let (count, comp) = tarjan(&g);
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[1], comp[2]);
        assert_ne!(comp[2], comp[3]);
        // sink completes first
        assert!(comp[3] < comp[0]);
    }

    #[test]
    fn isolated_vertices() {
        let g = Csr::from_edges(3, &[]);
        let (count, comp) = tarjan(&g);
        assert_eq!(count, 3);
        assert_eq!(comp, vec![0, 1, 2]);
    }
}
