//! Text formats for graphs and divisors.
//!
//! Graph files:
//!
//! ```text
//! # comments run to end of line
//! vertices 3
//! edge 1 2 3/2
//! edge 2 3 1
//! ```
//!
//! Vertices are numbered from 1 in files and 0 inside the library. A divisor
//! is a whitespace-separated list of rationals, one per vertex.

use num_traits::Signed;
use thiserror::Error;
use wrr_core::rational::{format_rational, parse_rational};
use wrr_core::{Divisor, Error as CoreError, Rational, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Semantic { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.into(),
    }
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_index(tok: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("expected a vertex number, found `{tok}`")));
    }
    match tok.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        _ => Err(semantic(line, format!("vertex {tok} out of range 1..={n}"))),
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut lines = significant_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "empty graph file; expected `vertices <n>`"))?;
    let n = match header.as_slice() {
        ["vertices", count] if count.bytes().all(|b| b.is_ascii_digit()) => count
            .parse::<usize>()
            .map_err(|_| syntax(header_line, format!("bad vertex count `{count}`")))?,
        _ => return Err(syntax(header_line, "expected `vertices <n>`")),
    };
    if n == 0 {
        return Err(semantic(header_line, "a graph needs at least one vertex"));
    }
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (line, tokens) in lines {
        let [kw, i, j, w] = tokens.as_slice() else {
            return Err(syntax(line, "expected `edge <i> <j> <weight>`"));
        };
        if *kw != "edge" {
            return Err(syntax(line, format!("unknown directive `{kw}`")));
        }
        let (i, j) = (parse_index(i, n, line)?, parse_index(j, n, line)?);
        let w = parse_rational(w).map_err(|e| syntax(line, e.to_string()))?;
        if i == j {
            return Err(semantic(line, format!("loop at vertex {}", i + 1)));
        }
        if !w.is_positive() {
            return Err(semantic(line, format!("nonpositive weight {w}")));
        }
        if let Some(first) = seen.insert((i.min(j), i.max(j)), line) {
            return Err(semantic(
                line,
                format!("edge {}-{} already given on line {first}", i + 1, j + 1),
            ));
        }
        edges.push((i, j, w));
    }
    WeightedGraph::new(n, &edges).map_err(|e| match e {
        CoreError::Disconnected { unreachable } => semantic(
            header_line,
            format!("graph is disconnected: vertex {} unreachable from vertex 1", unreachable + 1),
        ),
        other => semantic(header_line, other.to_string()),
    })
}

pub fn parse_divisor(text: &str, n: usize) -> Result<Divisor, ParseError> {
    let mut coeffs = Vec::with_capacity(n);
    let mut last = 1;
    for (line, tokens) in significant_lines(text) {
        last = line;
        for tok in tokens {
            coeffs.push(parse_rational(tok).map_err(|e| syntax(line, e.to_string()))?);
        }
    }
    if coeffs.len() != n {
        return Err(semantic(
            last,
            format!("divisor has {} coordinates, graph has {n} vertices", coeffs.len()),
        ));
    }
    Ok(Divisor::new(coeffs))
}

/// Canonical text: header, then edges with `i < j` in lexicographic order.
pub fn serialize_graph(graph: &WeightedGraph) -> String {
    let mut out = format!("vertices {}\n", graph.n());
    for (i, j, w) in graph.edges() {
        out.push_str(&format!("edge {} {} {}\n", i + 1, j + 1, format_rational(&w)));
    }
    out
}

pub fn serialize_divisor(d: &Divisor) -> String {
    d.coeffs()
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

/// A self-contained failing case: graph file, divisor line and, for
/// generated instances, where the generator was.
pub fn reproducer(graph: &WeightedGraph, divisor: &Divisor, origin: Option<(u64, usize)>) -> String {
    let mut out = String::from("--- reproducer ---\n");
    if let Some((seed, trial)) = origin {
        out.push_str(&format!("# seed {seed} trial {trial}\n"));
    }
    out.push_str(&serialize_graph(graph));
    out.push_str(&format!("# divisor\n# {}\n", serialize_divisor(divisor)));
    out
}
