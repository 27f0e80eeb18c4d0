//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use skewcut::brute_force::{
    bf_almost2sat, bf_bipartization, bf_multicut, bf_qhorn, bf_qhorn_backdoor, BipartizationMode,
};
use skewcut::gen::{self, SplitMix64};
use skewcut::graph::{ArcId, SkewGraph, VertexId, VertexSet};
use skewcut::reductions::{
    almost_2sat, edge_bipartization, is_qhorn, oct, qhorn_backdoor, CnfFormula, UndirectedGraph,
};
use skewcut::separators::{has_min_separator_with_pair, separator_collection, separator_size};
use skewcut::solver::{solve_with_stats, validate_multicut, ExplicitFamily, SolveOutcome};

struct Report {
    failures: Vec<String>,
    detail: String,
}

impl Report {
    fn new() -> Self {
        Report {
            failures: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

fn run(id: usize, title: &str, body: impl FnOnce(&mut Report)) -> bool {
    let start = Instant::now();
    let mut report = Report::new();
    body(&mut report);
    let secs = start.elapsed().as_secs_f64();
    let ok = report.failures.is_empty();
    println!(
        "{} criterion {id}: {title} ({secs:.1} s){}{}",
        if ok { "PASS" } else { "FAIL" },
        if report.detail.is_empty() { "" } else { "; " },
        report.detail
    );
    for f in report.failures.iter().filter(|f| !f.is_empty()) {
        println!("    {f}");
    }
    if report.failures.len() > 5 {
        println!("    ... {} failures in total", report.failures.len());
    }
    ok
}

fn pick(rng: &mut SplitMix64, lo: usize, hi: usize) -> usize {
    lo + rng.below((hi - lo + 1) as u64) as usize
}

/// Criteria 1 and 6 share the same 500 instances.
fn multicut_suite(r1: &mut Report, r6: &mut Report) {
    let mut rng = SplitMix64::new(0x5eed_0001);
    let (mut yes, mut max_nodes) = (0, 0);
    for i in 0..500 {
        let pairs = pick(&mut rng, 2, 12);
        let arcs = pick(&mut rng, 2 * pairs, 30);
        let d = pick(&mut rng, 1, 3);
        let sets = pick(&mut rng, 1, 4);
        let k = pick(&mut rng, 0, 3);
        let inst = gen::ssmc(rng.next_u64(), pairs, arcs, d, sets, k);
        let g = inst.graph().expect("generated graph");
        let expected = bf_multicut(&g, &inst.family, k).expect("within budget");
        let mut oracle = ExplicitFamily::new(inst.family.clone()).unwrap();
        match solve_with_stats(&g, &mut oracle, k) {
            Ok((outcome, stats)) => {
                r1.check(outcome.is_feasible() == expected.is_some(), || {
                    format!("instance {i}: solver {:?}, brute force {}", outcome.is_feasible(), expected.is_some())
                });
                if let SolveOutcome::Solution(cut) = &outcome {
                    yes += 1;
                    r1.check(validate_multicut(&g, &inst.family, &cut.arcs) && cut.arcs.len() <= 2 * k, || {
                        format!("instance {i}: witness fails validation")
                    });
                }
                let bound = (2 * d as u64).pow(stats.root_measure as u32);
                max_nodes = max_nodes.max(stats.nodes);
                r6.check(stats.nodes <= bound && stats.leaves <= bound, || {
                    format!("instance {i}: {} nodes, {} leaves, bound {bound}", stats.nodes, stats.leaves)
                });
            }
            Err(e) => {
                r1.check(false, || format!("instance {i}: {e}"));
                r6.check(false, || format!("instance {i}: {e}"));
            }
        }
    }
    r1.detail = format!("500 instances, {yes} YES");
    r6.detail = format!("largest tree {max_nodes} nodes");
}

fn truth_table_satisfiable(f: &CnfFormula) -> bool {
    (0u32..1 << f.n_vars()).any(|bits| {
        let assignment: Vec<bool> = (0..f.n_vars()).map(|x| bits >> x & 1 == 1).collect();
        f.is_satisfied_by(&assignment)
    })
}

fn almost_2sat_suite(r: &mut Report) {
    let mut rng = SplitMix64::new(0x5eed_0002);
    let mut yes = 0;
    for i in 0..500 {
        let vars = pick(&mut rng, 2, 8);
        let clauses = pick(&mut rng, 2 * vars, 16);
        let k = pick(&mut rng, 0, 3);
        let f = gen::cnf(rng.next_u64(), vars, clauses, 2);
        let expected = bf_almost2sat(&f, k).expect("within budget");
        match almost_2sat(&f, k) {
            Ok(found) => {
                r.check(found.is_some() == expected.is_some(), || {
                    format!("formula {i}: solver {:?}, brute force {:?}", found, expected)
                });
                if let Some(w) = found {
                    yes += 1;
                    r.check(w.len() <= k && truth_table_satisfiable(&f.without_clauses(&w)), || {
                        format!("formula {i}: residual of {w:?} is unsatisfiable")
                    });
                }
            }
            Err(e) => r.check(false, || format!("formula {i}: {e}")),
        }
    }
    r.detail = format!("500 formulas, {yes} YES");
}

fn cycle(n: usize) -> UndirectedGraph {
    UndirectedGraph::new(n, (1..=n).map(|i| (i, i % n + 1)).collect()).unwrap()
}

fn complete(n: usize) -> UndirectedGraph {
    let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    UndirectedGraph::new(n, edges).unwrap()
}

fn optimum(mut solve: impl FnMut(usize) -> skewcut::Result<Option<Vec<usize>>>) -> Option<usize> {
    (0..=4).find(|&k| matches!(solve(k), Ok(Some(_))))
}

fn bipartization_suite(r: &mut Report) {
    let bipartite = [
        ("C6", cycle(6)),
        ("C8", cycle(8)),
        ("path", UndirectedGraph::new(4, vec![(1, 2), (2, 3), (3, 4)]).unwrap()),
        ("K2,3", UndirectedGraph::new(5, vec![(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap()),
        ("edgeless", UndirectedGraph::new(3, vec![]).unwrap()),
    ];
    let mut oct_cases: Vec<(&str, UndirectedGraph, usize)> =
        vec![("triangle", cycle(3), 1), ("C5", cycle(5), 1), ("K4", complete(4), 2)];
    oct_cases.extend(bipartite.iter().map(|(n, g)| (*n, g.clone(), 0)));
    for (name, g, want) in &oct_cases {
        let got = optimum(|k| oct(g, k));
        let bf = optimum(|k| bf_bipartization(g, k, BipartizationMode::Vertex));
        r.check(got == Some(*want) && bf == Some(*want), || {
            format!("OCT {name}: solver {got:?}, brute force {bf:?}, expected {want}")
        });
    }
    let mut edge_cases: Vec<(&str, UndirectedGraph, usize)> = vec![
        ("C3", cycle(3), 1),
        ("C5", cycle(5), 1),
        ("C7", cycle(7), 1),
        ("C9", cycle(9), 1),
        ("K4", complete(4), 2),
    ];
    edge_cases.extend(bipartite.iter().map(|(n, g)| (*n, g.clone(), 0)));
    for (name, g, want) in &edge_cases {
        let got = optimum(|k| edge_bipartization(g, k));
        let bf = optimum(|k| bf_bipartization(g, k, BipartizationMode::Edge));
        r.check(got == Some(*want) && bf == Some(*want), || {
            format!("edge bipartization {name}: solver {got:?}, brute force {bf:?}, expected {want}")
        });
    }
}

fn random_formula(rng: &mut SplitMix64, vars: usize, clauses: usize, max_width: usize, horn: bool) -> CnfFormula {
    let list = (0..clauses)
        .map(|_| {
            let width = pick(rng, 1, max_width.min(vars));
            let mut clause: Vec<i32> = Vec::new();
            while clause.len() < width {
                let x = pick(rng, 1, vars) as i32;
                if clause.iter().any(|l| l.abs() == x) {
                    continue;
                }
                let positive = rng.coin() && !(horn && clause.iter().any(|&l| l > 0));
                clause.push(if positive { x } else { -x });
            }
            clause
        })
        .collect();
    CnfFormula::new(vars, list).unwrap()
}

fn qhorn_suite(r: &mut Report) {
    let mut rng = SplitMix64::new(0x5eed_0004);
    for i in 0..50 {
        let vars = pick(&mut rng, 2, 8);
        let n_clauses = pick(&mut rng, 1, 12);
        let horn = random_formula(&mut rng, vars, n_clauses, 4, true);
        let width_two = gen::cnf(rng.next_u64(), vars, pick(&mut rng, 1, 12), 2);
        for (kind, f) in [("Horn", &horn), ("width-2", &width_two)] {
            let got = qhorn_backdoor(f, 0);
            r.check(matches!(&got, Ok(Some(b)) if b.is_empty()), || {
                format!("{kind} formula {i}: backdoor {got:?}")
            });
        }
    }
    let nq = CnfFormula::new(
        3,
        vec![vec![1, 2, 3], vec![-1, -2], vec![-2, -3], vec![-1, -3], vec![1, 2], vec![2, 3], vec![1, 3]],
    )
    .unwrap();
    let none = qhorn_backdoor(&nq, 0);
    let one = qhorn_backdoor(&nq, 1);
    let ok = matches!(none, Ok(None))
        && matches!(&one, Ok(Some(b)) if b.len() == 1 && is_qhorn(&nq.normalized().without_variables(b)).unwrap());
    r.check(ok, || format!("non-q-Horn example: k=0 {none:?}, k=1 {one:?}"));

    let mut yes = 0;
    for i in 0..200 {
        let vars = pick(&mut rng, 3, 6);
        let n_clauses = pick(&mut rng, 6, 16);
        let f = random_formula(&mut rng, vars, n_clauses, 4, false);
        let k = pick(&mut rng, 0, 3);
        let expected = bf_qhorn_backdoor(&f, k).expect("within budget");
        match qhorn_backdoor(&f, k) {
            Ok(found) => {
                yes += usize::from(found.is_some());
                r.check(found.is_some() == expected.is_some(), || {
                    format!("formula {i} (k={k}): solver {found:?}, brute force {expected:?}")
                });
            }
            Err(e) => r.check(false, || format!("formula {i}: {e}")),
        }
        let recognised = is_qhorn(&f).unwrap();
        let bf = bf_qhorn(&f).unwrap();
        r.check(recognised == bf, || format!("formula {i}: is_qhorn {recognised}, brute force {bf}"));
    }
    r.detail = format!("200 random formulas, {yes} YES");
}

fn random_graph(rng: &mut SplitMix64, max_pairs: usize, max_arcs: usize) -> SkewGraph {
    let pairs = pick(rng, 1, max_pairs);
    let arcs = pick(rng, 0, max_arcs);
    gen::ssmc(rng.next_u64(), pairs, arcs, 1, 0, 0).graph().unwrap()
}

fn random_vertex(rng: &mut SplitMix64, g: &SkewGraph) -> VertexId {
    VertexId::from_index(rng.below(g.n_vertices() as u64) as usize)
}

fn involution_axioms(g: &SkewGraph) -> bool {
    let vertices_ok = g.vertices().all(|v| {
        let s = v.conjugate();
        s != v
            && s.conjugate() == v
            && VertexId::from_index(v.index()) == v
            && g.out_arcs(v).len() == g.in_arcs(s).len()
            && g.out_arcs(v).iter().all(|&a| g.tail(a) == v)
            && g.in_arcs(v).iter().all(|&a| g.head(a) == v)
    });
    let arcs_ok = g.arcs().all(|a| {
        let s = a.conjugate();
        s != a
            && s.conjugate() == a
            && g.tail(s) == g.head(a).conjugate()
            && g.head(s) == g.tail(a).conjugate()
            && g.out_arcs(g.tail(a)).contains(&a)
            && g.in_arcs(g.head(a)).contains(&a)
    });
    vertices_ok && arcs_ok
}

/// Vertex indices reachable from `sources` avoiding the arcs in `removed`.
fn reach(g: &SkewGraph, sources: &[usize], removed: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; g.n_vertices()];
    let mut stack: Vec<usize> = sources.to_vec();
    for &s in sources {
        seen[s] = true;
    }
    while let Some(u) = stack.pop() {
        for &a in g.out_arcs(VertexId::from_index(u)) {
            if g.is_deleted(a) || removed.contains(&a.index()) {
                continue;
            }
            let w = g.head(a).index();
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn combinations(n: usize, size: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..size).collect();
    if size > n {
        return;
    }
    loop {
        visit(&idx);
        let Some(pos) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All minimum `L`-`L'` separators, as ascending arc index lists.
fn all_min_separators(g: &SkewGraph, terminals: &[usize]) -> (usize, Vec<Vec<usize>>) {
    let sinks: Vec<usize> = terminals.iter().map(|&v| v ^ 1).collect();
    let cuts = |removed: &[usize]| {
        let seen = reach(g, terminals, removed);
        sinks.iter().all(|&t| !seen[t])
    };
    for size in 0..=g.n_arcs() {
        let mut found = Vec::new();
        combinations(g.n_arcs(), size, |c| {
            if cuts(c) {
                found.push(c.to_vec());
            }
        });
        if !found.is_empty() {
            return (size, found);
        }
    }
    unreachable!("removing every arc separates")
}

fn property_suite(r: &mut Report) {
    let mut rng = SplitMix64::new(0x5eed_0005);
    for i in 0..1000 {
        let g = random_graph(&mut rng, 12, 30);
        r.check(involution_axioms(&g), || format!("graph {i}: involution axioms fail"));
    }

    for i in 0..1000 {
        let g = random_graph(&mut rng, 10, 30);
        let b = VertexSet::from_vertices(g.n_pairs(), g.vertices().filter(|_| rng.coin()));
        let out_b = g.out_boundary(&b);
        let out_bc = g.out_boundary(&b.conjugate());
        let crossing = out_b.iter().any(|a| out_bc.contains(a));
        let q = b.difference(&b.conjugate());
        let out_q = g.out_boundary(&q).len();
        let ok = if crossing { out_q < out_b.len() } else { out_q == out_b.len() };
        r.check(ok, || {
            format!("sample {i}: |δ⁺(B)| = {}, |δ⁺(B∖B')| = {out_q}, crossing {crossing}", out_b.len())
        });
    }

    for i in 0..1000 {
        let mut g = random_graph(&mut rng, 10, 30);
        if g.n_arc_pairs() > 0 && rng.coin() {
            g.delete_pair(ArcId::from_pair(rng.below(g.n_arc_pairs() as u64) as usize));
        }
        let (u, v) = (random_vertex(&mut rng, &g), random_vertex(&mut rng, &g));
        let forward = g.reachable(&VertexSet::from_vertices(g.n_pairs(), [u]), None).contains(v);
        let backward = g
            .reachable(&VertexSet::from_vertices(g.n_pairs(), [v.conjugate()]), None)
            .contains(u.conjugate());
        r.check(forward == backward, || format!("sample {i}: {u} -> {v} is {forward}, conjugate is {backward}"));
    }

    let mut sampled = 0;
    let mut seeds = 0;
    while sampled < 100 {
        seeds += 1;
        let g = random_graph(&mut rng, 10, 12);
        let mut terminals = VertexSet::for_graph(&g);
        for _ in 0..pick(&mut rng, 1, 2) {
            let v = random_vertex(&mut rng, &g);
            if !terminals.contains(v.conjugate()) {
                terminals.insert(v);
            }
        }
        let lambda = match separator_size(&g, &terminals, 4) {
            Ok(Some(l)) if l > 0 => l,
            _ => continue,
        };
        sampled += 1;
        let term_idx: Vec<usize> = terminals.iter().map(|v| v.index()).collect();
        let (brute_lambda, seps) = all_min_separators(&g, &term_idx);
        r.check(brute_lambda == lambda, || format!("graph {sampled}: flow λ {lambda}, enumeration {brute_lambda}"));
        let coll = match separator_collection(&g, &terminals, lambda) {
            Ok(c) => c,
            Err(e) => {
                r.check(false, || format!("graph {sampled}: {e}"));
                continue;
            }
        };
        let sinks = terminals.conjugate();
        let mut covered = vec![false; g.n_arcs()];
        let mut previous: Option<VertexSet> = None;
        for i in 0..coll.len() {
            let x = coll.prefix(g.n_pairs(), i);
            let strict = previous.as_ref().map_or(true, |p| p.is_subset(&x) && p.len() < x.len());
            let inside = terminals.is_subset(&x) && x.is_disjoint(&sinks);
            let reachable = g.reachable_within(&terminals, &x) == x;
            let out = g.out_boundary(&x);
            r.check(strict && inside, || format!("graph {sampled}: layer {i} breaks the chain"));
            r.check(reachable, || format!("graph {sampled}: layer {i} is not reachable inside itself"));
            r.check(out.len() == lambda && out == coll.boundaries[i], || {
                format!("graph {sampled}: layer {i} has out-degree {}", out.len())
            });
            for a in out {
                covered[a.index()] = true;
            }
            previous = Some(x);
        }
        for sep in &seps {
            r.check(sep.iter().all(|&a| covered[a]), || {
                format!("graph {sampled}: minimum separator {sep:?} is not covered")
            });
        }
        for a in g.arcs() {
            let with_pair = seps.iter().any(|s| s.contains(&a.index()) && s.contains(&a.conjugate().index()));
            let got = has_min_separator_with_pair(&g, &terminals, a, lambda);
            r.check(got.as_ref().ok() == Some(&with_pair), || {
                format!("graph {sampled}: pair test on arc {} gave {got:?}, enumeration {with_pair}", a.index())
            });
            let in_some = seps.iter().any(|s| s.contains(&a.index()));
            let conj_in_some = seps.iter().any(|s| s.contains(&a.conjugate().index()));
            r.check(in_some == conj_in_some, || {
                format!("graph {sampled}: arc {} and its conjugate differ in separator membership", a.index())
            });
        }
    }
    r.detail = format!("100 collections from {seeds} draws");
}

/// Per size, the sum over four planted instances of the best of three runs.
fn scaling_suite(r: &mut Report) {
    let mut times = Vec::new();
    for m in [10_000usize, 20_000, 40_000] {
        let mut total = Duration::ZERO;
        for seed in 0..4u64 {
            let f = gen::planted_almost_2sat(0x5eed_0007 + seed, m / 8, m / 2 - 4);
            let g = skewcut::reductions::implication_graph(&f).unwrap();
            let family: Vec<Vec<VertexId>> =
                (1..=f.n_vars() as i32).map(|x| vec![VertexId::new(x).unwrap()]).collect();
            let mut best = Duration::MAX;
            for _ in 0..3 {
                let mut oracle = ExplicitFamily::new(family.clone()).unwrap();
                let start = Instant::now();
                let outcome = solve_with_stats(&g, &mut oracle, 2);
                best = best.min(start.elapsed());
                let ok = matches!(&outcome, Ok((SolveOutcome::Solution(cut), _)) if validate_multicut(&g, &family, &cut.arcs));
                r.check(ok, || format!("m = {m}, seed {seed}: expected a valid solution, got {outcome:?}"));
            }
            total += best;
        }
        times.push((m, total));
    }
    let ratios: Vec<f64> = times
        .windows(2)
        .map(|w| w[1].1.as_secs_f64() / w[0].1.as_secs_f64().max(1e-9))
        .collect();
    for (w, ratio) in times.windows(2).zip(&ratios) {
        r.check(*ratio <= 3.0, || format!("m {} -> {}: time ratio {ratio:.2}", w[0].0, w[1].0));
    }
    r.detail = times
        .iter()
        .map(|(m, t)| format!("m={m} {:.1} ms", t.as_secs_f64() * 1e3))
        .collect::<Vec<_>>()
        .join(", ");
    r.detail += &format!(", ratios {:.2} {:.2}", ratios[0], ratios[1]);
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/tests/golden")
}

fn cli_suite(r: &mut Report) {
    let dir = fixtures();
    let cases = std::fs::read_to_string(dir.join("cases.txt")).expect("golden case list");
    let mut count = 0;
    for line in cases.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (name, rest) = line.split_once(':').expect("case lines are `name: exit args...`");
        let mut words = rest.split_whitespace();
        let want_exit: i32 = words.next().and_then(|w| w.parse().ok()).expect("exit code");
        let args: Vec<String> = words
            .map(|w| w.strip_prefix('@').map_or(w.to_string(), |f| dir.join(f).display().to_string()))
            .collect();
        let expected = std::fs::read(dir.join(format!("{name}.out"))).unwrap_or_default();
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = skewcut_cli::run(&args, &mut out, &mut err);
            outputs.push((code, out));
        }
        count += 1;
        r.check(outputs[0] == outputs[1], || format!("{name}: output differs between runs"));
        r.check(outputs[0].0 == want_exit, || format!("{name}: exit {} expected {want_exit}", outputs[0].0));
        r.check(outputs[0].1 == expected, || {
            format!("{name}: stdout differs from golden:\n{}", String::from_utf8_lossy(&outputs[0].1))
        });
    }
    r.detail = format!("{count} golden cases");
}

fn main() {
    let mut results = Vec::new();
    let mut r6 = Report::new();
    results.push(run(1, "multicut matches brute force", |r| multicut_suite(r, &mut r6)));
    results.push(run(2, "Almost 2-SAT matches brute force", almost_2sat_suite));
    results.push(run(3, "bipartization optima", bipartization_suite));
    results.push(run(4, "q-Horn backdoors", qhorn_suite));
    results.push(run(5, "structural property suites", property_suite));
    results.push(run(6, "solver measure and tree size", |r| {
        r.failures = std::mem::take(&mut r6.failures);
        r.detail = std::mem::take(&mut r6.detail);
    }));
    results.push(run(7, "near-linear scaling", scaling_suite));
    results.push(run(8, "command-line contract", cli_suite));
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

