//! The `skewcut` command-line driver.
//!
//! [`run`] takes the arguments after the program name and writes the answer
//! to `out` and diagnostics to `err`. Exit codes: 0 for YES (or VALID, or a
//! generated instance), 1 for NO (or INVALID), 2 for usage, parse and
//! brute-force budget errors, 3 for internal failures and cross-check
//! disagreements.

use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use skewcut::brute_force::{
    bf_almost2sat, bf_bipartization, bf_multicut, bf_qhorn_backdoor, BipartizationMode,
};
use skewcut::formats::{emit_cnf, emit_graph, emit_ssmc, parse_cnf, parse_graph, parse_ssmc, ParseError};
use skewcut::reductions::{
    almost_2sat_with_stats, edge_bipartization_with_stats, is_qhorn, oct_with_stats,
    qhorn_backdoor_with_stats, two_sat_satisfiable, CnfFormula, UndirectedGraph,
};
use skewcut::solver::{solve_with_stats, validate_multicut, ExplicitFamily, SolveOutcome, SolveStats};
use skewcut::{gen, ArcSet, Error, SkewGraph, VertexId};

#[derive(Parser, Debug)]
#[command(name = "skewcut", version, about = "Parameterized solvers for skew-symmetric multicut and its relatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Skew-symmetric multicut on a `p ssmc` file
    Ssmc(SolveArgs),
    /// Delete at most k clauses of a 2-CNF to make it satisfiable
    A2sat(SolveArgs),
    /// Odd cycle transversal: delete at most k vertices to make a graph bipartite
    Oct(SolveArgs),
    /// Edge bipartization: delete at most k edges to make a graph bipartite
    Ebip(SolveArgs),
    /// Deletion backdoor of at most k variables into q-Horn
    Qhorn(SolveArgs),
    /// Check a solution file against an instance
    Verify(VerifyArgs),
    /// Generate a random instance
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Solution size bound
    #[arg(short = 'k')]
    k: usize,
    /// Also run the exhaustive solver and fail on disagreement
    #[arg(long)]
    brute_force: bool,
    /// Print search statistics to stderr
    #[arg(long)]
    stats: bool,
    /// Print a JSON record instead of plain text
    #[arg(long)]
    json: bool,
    /// Instance file, or `-` for stdin
    instance: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Problem {
    Ssmc,
    A2sat,
    Oct,
    Ebip,
    Qhorn,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(short = 'k')]
    k: usize,
    instance: String,
    solution: String,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Random multicut instance
    Ssmc {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        pairs: usize,
        #[arg(long)]
        arcs: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        sets: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Random CNF with fixed clause width
    Cnf {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 2)]
        width: usize,
    },
    /// Random simple graph, each edge kept with probability p
    Graph {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(_) | Error::BudgetExceeded(_) => Failure::Usage(e.to_string()),
            Error::Contract(_) | Error::Internal(_) => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the driver on `args` (without the program name) and returns the exit code.
pub fn run<S: AsRef<str>>(args: &[S], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = std::iter::once("skewcut").chain(args.iter().map(|a| a.as_ref()));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Ssmc(a) => solve(Problem::Ssmc, &a, out, err),
        Command::A2sat(a) => solve(Problem::A2sat, &a, out, err),
        Command::Oct(a) => solve(Problem::Oct, &a, out, err),
        Command::Ebip(a) => solve(Problem::Ebip, &a, out, err),
        Command::Qhorn(a) => solve(Problem::Qhorn, &a, out, err),
        Command::Verify(a) => verify(&a, out),
        Command::Gen(g) => generate(g, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            3
        }
    }
}

fn read_input(path: &str) -> Outcome<String> {
    let mut text = String::new();
    let read = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    Ok(text)
}

fn parsed<T>(path: &str, r: std::result::Result<T, ParseError>) -> Outcome<T> {
    r.map_err(|e| Failure::Usage(format!("{path}:{}:{}: {}", e.line, e.column, e.message)))
}

fn write_out(out: &mut dyn Write, text: &str) -> Outcome<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

/// One solution element, printed as a line of space-separated integers.
type Item = Vec<i64>;

struct Solved {
    items: Option<Vec<Item>>,
    stats: SolveStats,
}

fn solve(problem: Problem, a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome<i32> {
    let text = read_input(&a.instance)?;
    let start = Instant::now();
    let (solved, brute) = match problem {
        Problem::Ssmc => {
            let inst = parsed(&a.instance, parse_ssmc(&text))?;
            let g = inst.graph()?;
            let mut oracle = ExplicitFamily::new(inst.family.clone())?;
            let (outcome, stats) = solve_with_stats(&g, &mut oracle, a.k)?;
            let items = match outcome {
                SolveOutcome::Solution(cut) => {
                    if !validate_multicut(&g, &inst.family, &cut.arcs) {
                        return Err(Failure::Internal("multicut failed validation".into()));
                    }
                    Some(
                        cut.arcs
                            .iter()
                            .map(|a| vec![i64::from(g.tail(a).raw()), i64::from(g.head(a).raw())])
                            .collect(),
                    )
                }
                SolveOutcome::Infeasible => None,
            };
            let brute = if a.brute_force {
                Some(bf_multicut(&g, &inst.family, a.k)?.is_some())
            } else {
                None
            };
            (Solved { items, stats }, brute)
        }
        Problem::A2sat => {
            let f = parsed(&a.instance, parse_cnf(&text))?;
            let (found, stats) = almost_2sat_with_stats(&f, a.k)?;
            let brute = a.brute_force.then(|| bf_almost2sat(&f, a.k)).transpose()?;
            let items = found.map(|s| s.iter().map(|&c| vec![c as i64 + 1]).collect());
            (Solved { items, stats }, brute.map(|b| b.is_some()))
        }
        Problem::Oct | Problem::Ebip => {
            let g = parsed(&a.instance, parse_graph(&text))?;
            let (found, stats, mode) = if problem == Problem::Oct {
                let (found, stats) = oct_with_stats(&g, a.k)?;
                (found.map(|s| s.iter().map(|&v| vec![v as i64]).collect::<Vec<_>>()), stats, BipartizationMode::Vertex)
            } else {
                let (found, stats) = edge_bipartization_with_stats(&g, a.k)?;
                let items = found.map(|s| {
                    s.iter()
                        .map(|&e| {
                            let (u, v) = g.edges()[e];
                            vec![u as i64, v as i64]
                        })
                        .collect()
                });
                (items, stats, BipartizationMode::Edge)
            };
            let brute = a.brute_force.then(|| bf_bipartization(&g, a.k, mode)).transpose()?;
            (Solved { items: found, stats }, brute.map(|b| b.is_some()))
        }
        Problem::Qhorn => {
            let f = parsed(&a.instance, parse_cnf(&text))?;
            let (found, stats) = qhorn_backdoor_with_stats(&f, a.k)?;
            let brute = a.brute_force.then(|| bf_qhorn_backdoor(&f, a.k)).transpose()?;
            let items = found.map(|s| s.iter().map(|&x| vec![x as i64]).collect());
            (Solved { items, stats }, brute.map(|b| b.is_some()))
        }
    };
    let elapsed = start.elapsed();
    if let Some(expected) = brute {
        if expected != solved.items.is_some() {
            return Err(Failure::Internal(format!(
                "solver answered {}, brute force answered {}",
                yes_no(solved.items.is_some()),
                yes_no(expected)
            )));
        }
    }
    let mut items = solved.items;
    if let Some(list) = items.as_mut() {
        list.sort();
    }
    if a.stats {
        let s = &solved.stats;
        let _ = writeln!(
            err,
            "c nodes {} leaves {} rule_applications {} max_depth {} component_calls {} oracle_calls {} wall_time_ms {:.3}",
            s.nodes,
            s.leaves,
            s.rule_applications,
            s.max_depth,
            s.component_calls,
            s.oracle_calls,
            elapsed.as_secs_f64() * 1e3
        );
    }
    let text = if a.json {
        let mut stats = serde_json::to_value(solved.stats).expect("stats serialize");
        stats["wall_time_ms"] = json!(elapsed.as_secs_f64() * 1e3);
        let solution = items.as_ref().map(|list| {
            list.iter()
                .map(|item| if item.len() == 1 { json!(item[0]) } else { json!(item) })
                .collect::<Vec<Value>>()
        });
        let record = json!({
            "problem": problem_name(problem),
            "k": a.k,
            "answer": yes_no(items.is_some()),
            "solution": solution,
            "stats": stats,
        });
        format!("{record}\n")
    } else {
        render(problem, items.as_deref())
    };
    write_out(out, &text)?;
    Ok(if items.is_some() { 0 } else { 1 })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn problem_name(p: Problem) -> &'static str {
    match p {
        Problem::Ssmc => "ssmc",
        Problem::A2sat => "a2sat",
        Problem::Oct => "oct",
        Problem::Ebip => "ebip",
        Problem::Qhorn => "qhorn",
    }
}

fn render(problem: Problem, items: Option<&[Item]>) -> String {
    let Some(items) = items else {
        return "NO\n".into();
    };
    let mut text = String::from("YES\n");
    for item in items {
        let words: Vec<String> = item.iter().map(i64::to_string).collect();
        if problem == Problem::Ssmc {
            text.push_str("a ");
        }
        text.push_str(&words.join(" "));
        text.push('\n');
    }
    text
}

/// Reads a solution file: an optional `YES` line, then one element per line.
fn parse_solution(path: &str, text: &str, width: usize, tag: Option<&str>) -> Outcome<Vec<Item>> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut words: Vec<&str> = line.split_whitespace().collect();
        if words.is_empty() || (i == 0 && words == ["YES"]) {
            continue;
        }
        if let Some(tag) = tag {
            if words[0] != tag {
                return Err(Failure::Usage(format!("{path}:{}: expected a `{tag}` line", i + 1)));
            }
            words.remove(0);
        }
        if words.len() != width {
            return Err(Failure::Usage(format!("{path}:{}: expected {width} numbers", i + 1)));
        }
        let item = words
            .iter()
            .map(|w| w.parse::<i64>())
            .collect::<std::result::Result<Item, _>>()
            .map_err(|_| Failure::Usage(format!("{path}:{}: not a number", i + 1)))?;
        items.push(item);
    }
    Ok(items)
}

/// Distinct values in `1..=limit`, or None.
fn indices(items: &[Item], limit: usize) -> Option<Vec<usize>> {
    let mut out: Vec<usize> = Vec::with_capacity(items.len());
    for item in items {
        let x = usize::try_from(item[0]).ok().filter(|&x| x >= 1 && x <= limit)?;
        if out.contains(&x) {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome<i32> {
    let text = read_input(&a.instance)?;
    let sol_text = read_input(&a.solution)?;
    let valid = match a.problem {
        Problem::Ssmc => {
            let inst = parsed(&a.instance, parse_ssmc(&text))?;
            let g = inst.graph()?;
            let items = parse_solution(&a.solution, &sol_text, 2, Some("a"))?;
            ssmc_solution(&g, &items).is_some_and(|cut| {
                cut.len() <= 2 * a.k && validate_multicut(&g, &inst.family, &cut)
            })
        }
        Problem::A2sat => {
            let f = parsed(&a.instance, parse_cnf(&text))?;
            let items = parse_solution(&a.solution, &sol_text, 1, None)?;
            match indices(&items, f.n_clauses()) {
                Some(c) if c.len() <= a.k => {
                    let removed: Vec<usize> = c.iter().map(|x| x - 1).collect();
                    two_sat_satisfiable(&f.without_clauses(&removed))?
                }
                _ => false,
            }
        }
        Problem::Oct => {
            let g = parsed(&a.instance, parse_graph(&text))?;
            let items = parse_solution(&a.solution, &sol_text, 1, None)?;
            match indices(&items, g.n_vertices()) {
                Some(vs) if vs.len() <= a.k => g.is_bipartite_without(&vs, &[]),
                _ => false,
            }
        }
        Problem::Ebip => {
            let g = parsed(&a.instance, parse_graph(&text))?;
            let items = parse_solution(&a.solution, &sol_text, 2, None)?;
            match edge_indices(&g, &items) {
                Some(es) if es.len() <= a.k => g.is_bipartite_without(&[], &es),
                _ => false,
            }
        }
        Problem::Qhorn => {
            let f = parsed(&a.instance, parse_cnf(&text))?;
            let items = parse_solution(&a.solution, &sol_text, 1, None)?;
            match indices(&items, f.n_vars()) {
                Some(vs) if vs.len() <= a.k => qhorn_after(&f, &vs)?,
                _ => false,
            }
        }
    };
    write_out(out, if valid { "VALID\n" } else { "INVALID\n" })?;
    Ok(if valid { 0 } else { 1 })
}

fn qhorn_after(f: &CnfFormula, vars: &[usize]) -> skewcut::Result<bool> {
    is_qhorn(&f.normalized().without_variables(vars))
}

/// Maps `a u v` lines to distinct arcs with those endpoints.
fn ssmc_solution(g: &SkewGraph, items: &[Item]) -> Option<ArcSet> {
    let mut cut = ArcSet::for_graph(g);
    for item in items {
        let u = VertexId::new(i32::try_from(item[0]).ok()?)?;
        let v = VertexId::new(i32::try_from(item[1]).ok()?)?;
        let a = g.arcs().find(|&a| g.tail(a) == u && g.head(a) == v && !cut.contains(a))?;
        cut.insert(a);
    }
    Some(cut)
}

/// Maps `u v` lines to distinct edge indices; parallel edges are matched in order.
fn edge_indices(g: &UndirectedGraph, items: &[Item]) -> Option<Vec<usize>> {
    let mut used: Vec<usize> = Vec::new();
    for item in items {
        let (u, v) = (item[0], item[1]);
        let e = g.edges().iter().enumerate().position(|(i, &(a, b))| {
            let (a, b) = (a as i64, b as i64);
            ((a, b) == (u, v) || (b, a) == (u, v)) && !used.contains(&i)
        })?;
        used.push(e);
    }
    Some(used)
}

fn generate(cmd: GenCommand, out: &mut dyn Write) -> Outcome<i32> {
    let text = match cmd {
        GenCommand::Ssmc { seed, pairs, arcs, d, sets, k } => {
            if pairs == 0 || d == 0 {
                return Err(Failure::Usage("--pairs and --d must be positive".into()));
            }
            emit_ssmc(&gen::ssmc(seed, pairs, arcs, d, sets, k))
        }
        GenCommand::Cnf { seed, vars, clauses, width } => {
            if width == 0 || width > vars {
                return Err(Failure::Usage("--width must be between 1 and --vars".into()));
            }
            emit_cnf(&gen::cnf(seed, vars, clauses, width))
        }
        GenCommand::Graph { seed, n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Failure::Usage("--p must be between 0 and 1".into()));
            }
            emit_graph(&gen::graph(seed, n, p))
        }
    };
    write_out(out, &text)?;
    Ok(0)
}
