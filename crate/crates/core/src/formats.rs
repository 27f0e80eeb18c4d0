//! Text formats: signed-vertex multicut instances, DIMACS CNF and DIMACS-style
//! edge lists.
//!
//! Parsers report the 1-based line and column of the first problem. Emitters
//! write a canonical form that parses back to an equal value.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{SkewGraph, VertexId};
use crate::reductions::{CnfFormula, UndirectedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn fail<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number<T: std::str::FromStr>(line: usize, (column, text): (usize, &str), what: &str) -> Result<T, ParseError> {
    text.parse()
        .or_else(|_| fail(line, column, format!("expected {what}, found `{text}`")))
}

struct Header {
    line: usize,
    values: Vec<usize>,
}

/// Reads a `p <kind> <values...>` line.
fn header(line: usize, toks: &[(usize, &str)], kind: &str, names: &[&str]) -> Result<Header, ParseError> {
    if toks.len() < 2 || toks[1].1 != kind {
        let column = toks.get(1).map_or(toks[0].0 + 1, |t| t.0);
        return fail(line, column, format!("expected `p {kind}` header"));
    }
    if toks.len() != 2 + names.len() {
        return fail(
            line,
            toks[0].0,
            format!("`p {kind}` header takes {} values: {}", names.len(), names.join(" ")),
        );
    }
    let values = toks[2..]
        .iter()
        .zip(names)
        .map(|(&t, name)| number(line, t, name))
        .collect::<Result<_, _>>()?;
    Ok(Header { line, values })
}

fn no_header(line: usize, column: usize) -> ParseError {
    ParseError {
        line,
        column,
        message: "data before the `p` header".into(),
    }
}

fn second_header(line: usize, column: usize) -> ParseError {
    ParseError {
        line,
        column,
        message: "duplicate `p` header".into(),
    }
}

fn missing_header(text: &str) -> ParseError {
    ParseError {
        line: text.lines().count().max(1),
        column: 1,
        message: "missing `p` header".into(),
    }
}

/// A skew-symmetric multicut instance as written in a `p ssmc` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsmcInstance {
    pub n_pairs: usize,
    /// Each entry declares the arc `(u, v)` and its conjugate `(σv, σu)`.
    pub arcs: Vec<(VertexId, VertexId)>,
    pub k: usize,
    pub d: usize,
    pub family: Vec<Vec<VertexId>>,
}

impl SsmcInstance {
    pub fn graph(&self) -> crate::Result<SkewGraph> {
        SkewGraph::build(self.n_pairs, &self.arcs)
    }
}

fn vertex(line: usize, tok: (usize, &str), n_pairs: usize) -> Result<VertexId, ParseError> {
    let raw: i32 = number(line, tok, "a signed vertex")?;
    match VertexId::new(raw) {
        Some(v) if v.pair() < n_pairs => Ok(v),
        _ => fail(line, tok.0, format!("vertex {raw} is outside ±1..±{n_pairs}")),
    }
}

/// Parses `p ssmc <n_pairs> <n_arc_pairs> <k> <d>` followed by `a u v`,
/// `t v1 .. vj` and `c` lines.
pub fn parse_ssmc(text: &str) -> Result<SsmcInstance, ParseError> {
    let mut head: Option<Header> = None;
    let mut arcs = Vec::new();
    let mut family = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&(column, tag)) = toks.first() else {
            continue;
        };
        match tag {
            "c" => {}
            "p" => {
                if head.is_some() {
                    return Err(second_header(line, column));
                }
                head = Some(header(line, &toks, "ssmc", &["n_pairs", "n_arc_pairs", "k", "d"])?);
            }
            "a" | "t" => {
                let Some(h) = &head else {
                    return Err(no_header(line, column));
                };
                let (n_pairs, d) = (h.values[0], h.values[3]);
                let verts = toks[1..]
                    .iter()
                    .map(|&t| vertex(line, t, n_pairs))
                    .collect::<Result<Vec<_>, _>>()?;
                if tag == "a" {
                    if verts.len() != 2 {
                        return fail(line, column, "arc lines take exactly two vertices");
                    }
                    arcs.push((verts[0], verts[1]));
                } else {
                    if verts.is_empty() || verts.len() > d {
                        return fail(line, column, format!("terminal lines take 1 to {d} vertices"));
                    }
                    family.push(verts);
                }
            }
            other => return fail(line, column, format!("unknown line tag `{other}`")),
        }
    }
    let h = head.ok_or_else(|| missing_header(text))?;
    if arcs.len() != h.values[1] {
        return fail(
            h.line,
            1,
            format!("header declares {} arc pairs but {} were given", h.values[1], arcs.len()),
        );
    }
    Ok(SsmcInstance {
        n_pairs: h.values[0],
        arcs,
        k: h.values[2],
        d: h.values[3],
        family,
    })
}

pub fn emit_ssmc(inst: &SsmcInstance) -> String {
    let mut out = format!("p ssmc {} {} {} {}\n", inst.n_pairs, inst.arcs.len(), inst.k, inst.d);
    for (u, v) in &inst.arcs {
        writeln!(out, "a {u} {v}").unwrap();
    }
    for set in &inst.family {
        out.push('t');
        for v in set {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses DIMACS CNF. Clauses are zero-terminated and may span lines.
pub fn parse_cnf(text: &str) -> Result<CnfFormula, ParseError> {
    let mut head: Option<Header> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last = (1, 1);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&(column, tag)) = toks.first() else {
            continue;
        };
        match tag {
            "c" => continue,
            "p" => {
                if head.is_some() {
                    return Err(second_header(line, column));
                }
                head = Some(header(line, &toks, "cnf", &["n_vars", "n_clauses"])?);
                continue;
            }
            _ => {}
        }
        let Some(h) = &head else {
            return Err(no_header(line, column));
        };
        let n_vars = h.values[0];
        for &tok in &toks {
            let lit: i64 = number(line, tok, "a literal")?;
            if lit == 0 {
                if current.is_empty() {
                    return fail(line, tok.0, "empty clause");
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n_vars {
                return fail(line, tok.0, format!("literal {lit} is outside ±1..±{n_vars}"));
            } else {
                current.push(lit as i32);
            }
            last = (line, tok.0);
        }
    }
    let h = head.ok_or_else(|| missing_header(text))?;
    if !current.is_empty() {
        return fail(last.0, last.1, "last clause is not terminated by 0");
    }
    if clauses.len() != h.values[1] {
        return fail(
            h.line,
            1,
            format!("header declares {} clauses but {} were given", h.values[1], clauses.len()),
        );
    }
    CnfFormula::new(h.values[0], clauses).or_else(|e| fail(h.line, 1, e.to_string()))
}

pub fn emit_cnf(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.n_vars(), f.n_clauses());
    for clause in f.clauses() {
        for lit in clause {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses `p edge <n> <m>` followed by `e u v` lines.
pub fn parse_graph(text: &str) -> Result<UndirectedGraph, ParseError> {
    let mut head: Option<Header> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&(column, tag)) = toks.first() else {
            continue;
        };
        match tag {
            "c" => {}
            "p" => {
                if head.is_some() {
                    return Err(second_header(line, column));
                }
                head = Some(header(line, &toks, "edge", &["n_vertices", "n_edges"])?);
            }
            "e" => {
                let Some(h) = &head else {
                    return Err(no_header(line, column));
                };
                if toks.len() != 3 {
                    return fail(line, column, "edge lines take exactly two vertices");
                }
                let n = h.values[0];
                let mut ends = [0usize; 2];
                for (end, &tok) in ends.iter_mut().zip(&toks[1..]) {
                    *end = number(line, tok, "a vertex")?;
                    if *end == 0 || *end > n {
                        return fail(line, tok.0, format!("vertex {end} is outside 1..{n}"));
                    }
                }
                if ends[0] == ends[1] {
                    return fail(line, toks[2].0, format!("self-loop at vertex {}", ends[0]));
                }
                edges.push((ends[0], ends[1]));
            }
            other => return fail(line, column, format!("unknown line tag `{other}`")),
        }
    }
    let h = head.ok_or_else(|| missing_header(text))?;
    if edges.len() != h.values[1] {
        return fail(
            h.line,
            1,
            format!("header declares {} edges but {} were given", h.values[1], edges.len()),
        );
    }
    UndirectedGraph::new(h.values[0], edges).or_else(|e| fail(h.line, 1, e.to_string()))
}

pub fn emit_graph(g: &UndirectedGraph) -> String {
    let mut out = format!("p edge {} {}\n", g.n_vertices(), g.edges().len());
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
