//! Plain-text graph format: first line `n`, then one `u v` edge per line.
//! `#` starts a comment; blank lines are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Digraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing vertex count")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
}

fn strip(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_graph(text: &str) -> Result<Digraph, ParseError> {
    let mut n: Option<usize> = None;
    let mut seen = BTreeSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = strip(raw);
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let malformed = || ParseError::Malformed { line, text: raw.to_string() };
        let Some(count) = n else {
            if fields.len() != 1 {
                return Err(malformed());
            }
            n = Some(fields[0].parse().map_err(|_| malformed())?);
            continue;
        };
        if fields.len() != 2 {
            return Err(malformed());
        }
        let u: usize = fields[0].parse().map_err(|_| malformed())?;
        let v: usize = fields[1].parse().map_err(|_| malformed())?;
        for vertex in [u, v] {
            if vertex >= count {
                return Err(ParseError::VertexOutOfRange { line, vertex, n: count });
            }
        }
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::DuplicateEdge { line, u, v });
        }
    }
    let n = n.ok_or(ParseError::MissingHeader { line: last_line.max(1) })?;
    Ok(Digraph::from_edges(n, seen).expect("validated while parsing"))
}

/// Canonical text: header, then edges in lexicographic order.
pub fn emit_graph(g: &Digraph) -> String {
    let mut s = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Reads a `# principal: v1 v2 ...` comment line, if any.
pub fn parse_principal_sidecar(text: &str) -> Option<Vec<usize>> {
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?.trim().strip_prefix("principal:")?;
        rest.split_whitespace().map(|t| t.parse().ok()).collect()
    })
}

pub fn emit_principal_sidecar(principals: &[usize]) -> String {
    let list: Vec<String> = principals.iter().map(ToString::to_string).collect();
    format!("# principal: {}\n", list.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path() {
        let g = parse_graph("3\n0 1\n1 2\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn comments_and_blanks() {
        let g = parse_graph("# hello\n\n2 # two vertices\n1 0 # back\n").unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_graph("2\n0 0\n"), Err(ParseError::SelfLoop { line: 2, vertex: 0 }));
        assert_eq!(
            parse_graph("2\n0 1\n\n0 1\n"),
            Err(ParseError::DuplicateEdge { line: 4, u: 0, v: 1 })
        );
        assert!(matches!(parse_graph("2\n0 5\n"), Err(ParseError::VertexOutOfRange { line: 2, .. })));
        assert!(matches!(parse_graph("2\n0 1 2\n"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_graph("x\n"), Err(ParseError::Malformed { line: 1, .. })));
        assert!(matches!(parse_graph("# only\n"), Err(ParseError::MissingHeader { .. })));
    }

    #[test]
    fn sidecar_roundtrip() {
        let text = format!("{}{}", emit_principal_sidecar(&[0, 1, 2]), "3\n");
        assert_eq!(parse_principal_sidecar(&text), Some(vec![0, 1, 2]));
        assert_eq!(parse_graph(&text).unwrap().n(), 3);
    }
}
