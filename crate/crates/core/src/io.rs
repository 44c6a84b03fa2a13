//! Line-oriented text formats: graphs, measurement files, edge id lists.
//!
//! Graph files look like
//!
//! ```text
//! c optional comments
//! p flowmon 3 3
//! e 0 1 1
//! e 1 2 1.5
//! e 2 0 0.000001
//! ```
//!
//! Edge ids are assigned in file order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeId, EdgeSet, Graph, GraphError};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !is_comment(l))
}

fn parse_field<T: std::str::FromStr>(
    line: usize,
    what: &str,
    tok: Option<&str>,
) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing `p flowmon` header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("flowmon") {
        return Err(err(hline, "expected `p flowmon <n> <m>`"));
    }
    let n: usize = parse_field(hline, "vertex count", toks.next())?;
    let m: usize = parse_field(hline, "edge count", toks.next())?;
    if toks.next().is_some() {
        return Err(err(hline, "trailing tokens in header"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (lno, line) in lines {
        last_line = lno;
        let mut toks = line.split_whitespace();
        if toks.next() != Some("e") {
            return Err(err(lno, "expected `e <u> <v> <w>`"));
        }
        let u: usize = parse_field(lno, "endpoint", toks.next())?;
        let v: usize = parse_field(lno, "endpoint", toks.next())?;
        let w_tok = toks.next().ok_or_else(|| err(lno, "missing weight"))?;
        let w: Weight = w_tok.parse().map_err(|e| err(lno, format!("{e}")))?;
        if toks.next().is_some() {
            return Err(err(lno, "trailing tokens in edge line"));
        }
        if u >= n || v >= n {
            return Err(err(lno, format!("endpoint out of range for {n} vertices")));
        }
        if edges.len() == m {
            return Err(err(lno, format!("more than the declared {m} edges")));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(err(
            last_line,
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges).map_err(|e| match e {
        GraphError::WeightOverflow(_) => err(last_line, "total edge weight overflows"),
        other => err(last_line, other.to_string()),
    })
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p flowmon {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.weight).unwrap();
    }
    out
}

/// Parses `r <edge_id> <signed integer>` lines.
pub fn parse_readings(text: &str) -> Result<BTreeMap<EdgeId, i64>, ParseError> {
    let mut out = BTreeMap::new();
    for (lno, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("r") {
            return Err(err(lno, "expected `r <edge_id> <value>`"));
        }
        let e: usize = parse_field(lno, "edge id", toks.next())?;
        let value: i64 = parse_field(lno, "reading", toks.next())?;
        if toks.next().is_some() {
            return Err(err(lno, "trailing tokens in reading line"));
        }
        if out.insert(EdgeId(e), value).is_some() {
            return Err(err(lno, format!("duplicate reading for edge {e}")));
        }
    }
    Ok(out)
}

pub fn write_readings(readings: &BTreeMap<EdgeId, i64>) -> String {
    let mut out = String::new();
    for (e, v) in readings {
        writeln!(out, "r {e} {v}").unwrap();
    }
    out
}

/// Parses a comma-separated edge id list such as `0,3,7`. The empty string is
/// the empty set.
pub fn parse_edge_list(s: &str) -> Result<EdgeSet, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(EdgeSet::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map(EdgeId)
                .map_err(|_| err(1, format!("invalid edge id `{tok}`")))
        })
        .collect()
}

pub fn format_edge_list(m: &EdgeSet) -> String {
    m.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_graph("c hello\np flowmon 3 2\n\ne 0 1 1\nc mid\ne 1 2 2.5\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge(EdgeId(1)).weight, "2.5".parse().unwrap());
        assert_eq!(write_graph(&g), "p flowmon 3 2\ne 0 1 1\ne 1 2 2.5\n");
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("", 1),
            ("p flowmon 2\n", 1),
            ("p flowmon 2 1\ne 0 2 1\n", 2),
            ("p flowmon 2 1\ne 0 1 x\n", 2),
            ("p flowmon 2 1\ne 0 1 1.1234567\n", 2),
            ("p flowmon 2 2\ne 0 1 1\n", 2),
            ("p flowmon 2 1\ne 0 1 1\ne 1 0 1\n", 3),
            ("p flowmon 2 1\nc x\nq 0 1 1\n", 3),
        ];
        for (text, line) in cases {
            let e = parse_graph(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
    }

    #[test]
    fn readings_and_lists() {
        let r = parse_readings("r 0 4\nc x\nr 3 -7\n").unwrap();
        assert_eq!(r[&EdgeId(3)], -7);
        assert_eq!(write_readings(&r), "r 0 4\nr 3 -7\n");
        assert!(parse_readings("r 0 1\nr 0 2\n").is_err());
        let m = parse_edge_list("3, 1,2").unwrap();
        assert_eq!(format_edge_list(&m), "1,2,3");
        assert!(parse_edge_list("").unwrap().is_empty());
        assert!(parse_edge_list("1,,2").is_err());
    }
}
