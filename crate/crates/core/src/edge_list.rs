//! Plain-text edge lists.
//!
//! ```text
//! n m
//! u v      (m lines, 0 <= u < v < n, ascending lexicographic order)
//! ```

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::GraphError;
use crate::graph::Graph;

pub fn write_edge_list_to<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let file = File::create(path)?;
    write_edge_list_to(g, BufWriter::new(file))?;
    Ok(())
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    read_edge_list_from(File::open(path)?)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize), GraphError> {
    let err = |message: String| GraphError::Parse { line: lineno, message };
    let mut fields = line.split_ascii_whitespace();
    let mut next = |what: &str| -> Result<usize, GraphError> {
        let field = fields
            .next()
            .ok_or_else(|| err(format!("missing {what}")))?;
        field
            .parse()
            .map_err(|_| err(format!("{what} `{field}` is not a non-negative integer")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(err("expected exactly two fields".into()));
    }
    Ok((a, b))
}

pub fn read_edge_list_from<R: Read>(input: R) -> Result<Graph, GraphError> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (n, m) = loop {
        match lines.next() {
            Some((lineno, line)) => {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                break parse_pair(&line, lineno)?;
            }
            None => {
                return Err(GraphError::Parse {
                    line: 1,
                    message: "missing header `n m`".into(),
                })
            }
        }
    };
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    let mut last_line = 1;
    for (lineno, line) in lines {
        let line = line?;
        last_line = lineno;
        if line.trim().is_empty() {
            continue;
        }
        let (u, v) = parse_pair(&line, lineno)?;
        let err = |message: String| GraphError::Parse { line: lineno, message };
        if u >= n || v >= n {
            return Err(err(format!("vertex out of range in edge ({u}, {v}), n = {n}")));
        }
        if u == v {
            return Err(err(format!("self-loop at vertex {u}")));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(err(format!("duplicate edge ({}, {})", key.0, key.1)));
        }
        if edges.len() == m {
            return Err(err(format!("more than the declared {m} edges")));
        }
        edges.push(key);
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: last_line,
            message: format!("header declares {m} edges but {} were found", edges.len()),
        });
    }
    Graph::from_edges(n, edges).map_err(|e| GraphError::Parse {
        line: 0,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Graph, GraphError> {
        read_edge_list_from(s.as_bytes())
    }

    #[test]
    fn reads_path() {
        assert_eq!(parse("3 2\n0 1\n1 2").unwrap(), Graph::path(3));
    }

    #[test]
    fn self_loop_reports_line() {
        match parse("2 1\n0 0") {
            Err(GraphError::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_parse_errors() {
        assert!(matches!(parse("3 1\n0 5"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(
            parse("3 2\n0 1\n1 0"),
            Err(GraphError::Parse { line: 3, .. })
        ));
        assert!(matches!(parse("3 1\n0 x"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse("3 2\n0 1"), Err(GraphError::Parse { .. })));
        assert!(matches!(parse(""), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn writes_canonical_form() {
        let mut buf = Vec::new();
        write_edge_list_to(&Graph::cycle(4), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "4 4\n0 1\n0 3\n1 2\n2 3\n");
    }
}
