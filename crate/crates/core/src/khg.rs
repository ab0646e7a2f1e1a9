//! The `.khg` text format for k-graphs.
//!
//! ```text
//! # optional comments
//! khg 1
//! k 3
//! n 4
//! e 0 1 2
//! ```

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, KGraph};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses a `.khg` document. Vertices within an edge may come in any order.
pub fn parse_khg(text: &str) -> Result<KGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut header = |key: &str| -> Result<(usize, usize)> {
        let (no, line) = lines.next().ok_or_else(|| parse_err(text.lines().count() + 1, format!("missing `{key}` header")))?;
        let mut words = line.split_whitespace();
        if words.next() != Some(key) {
            return Err(parse_err(no, format!("expected `{key} <int>`, found `{line}`")));
        }
        let value = words
            .next()
            .and_then(|w| w.parse::<usize>().ok())
            .ok_or_else(|| parse_err(no, format!("`{key}` needs a non-negative integer")))?;
        if words.next().is_some() {
            return Err(parse_err(no, format!("trailing input after `{key} {value}`")));
        }
        Ok((no, value))
    };
    let (no, version) = header("khg")?;
    if version != 1 {
        return Err(parse_err(no, format!("unsupported version {version}")));
    }
    let (no, k) = header("k")?;
    if k == 0 {
        return Err(parse_err(no, "k must be positive"));
    }
    let (_, n) = header("n")?;

    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for (no, line) in lines {
        let mut words = line.split_whitespace();
        if words.next() != Some("e") {
            return Err(parse_err(no, format!("expected an edge line `e v1 ... v{k}`, found `{line}`")));
        }
        let mut e = Vec::with_capacity(k);
        for w in words {
            let v: usize = w.parse().map_err(|_| parse_err(no, format!("`{w}` is not a vertex id")))?;
            if v >= n {
                return Err(parse_err(no, format!("vertex {v} out of range for n = {n}")));
            }
            e.push(v);
        }
        if e.len() != k {
            return Err(parse_err(no, format!("edge has {} vertices, expected k = {k}", e.len())));
        }
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_err(no, "edge repeats a vertex"));
        }
        if !edges.insert(e.clone()) {
            return Err(parse_err(no, format!("duplicate edge {e:?}")));
        }
    }
    KGraph::new(k, n, edges)
}

/// Canonical `.khg` text, edges in lexicographic order. Each line of
/// `comment` becomes a `# ` line at the top.
pub fn write_khg(g: &KGraph, comment: Option<&str>) -> String {
    let mut out = String::new();
    for line in comment.into_iter().flat_map(str::lines) {
        writeln!(out, "# {line}").expect("writing to a String");
    }
    writeln!(out, "khg 1\nk {}\nn {}", g.k(), g.n()).expect("writing to a String");
    for e in g.edges() {
        out.push('e');
        for v in e {
            write!(out, " {v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(r: Result<KGraph>) -> usize {
        match r {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_minimal_document() {
        let g = parse_khg("khg 1\nk 3\nn 4\ne 0 1 2\n").unwrap();
        assert_eq!((g.k(), g.n(), g.edge_count()), (3, 4, 1));
        let g = parse_khg("# c6\nkhg 1 # v1\n\nk 3\nn 6\ne 2 1 0\ne 5 0 1\n").unwrap();
        assert!(g.contains(&[0, 1, 5]));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_khg("khg 1\nk 3\nn 4\ne 0 1\n")), 4);
        assert_eq!(line_of(parse_khg("khg 2\nk 3\nn 4\n")), 1);
        assert_eq!(line_of(parse_khg("kgh 1\n")), 1);
        assert_eq!(line_of(parse_khg("khg 1\nk 3\nn 4\ne 0 1 9\n")), 4);
        assert_eq!(line_of(parse_khg("khg 1\nk 3\nn 4\ne 0 1 2\n# dup\ne 2 1 0\n")), 6);
        assert_eq!(line_of(parse_khg("khg 1\nk 3\nn 4\ne 0 0 2\n")), 4);
        assert_eq!(line_of(parse_khg("khg 1\nk 3\n")), 3);
        assert_eq!(line_of(parse_khg("khg 1\nk 3\nn 4\nf 0 1 2\n")), 4);
    }

    #[test]
    fn writes_canonical_text() {
        let g = parse_khg("khg 1\nk 2\nn 3\ne 2 1\ne 1 0\n").unwrap();
        assert_eq!(write_khg(&g, Some("path")), "# path\nkhg 1\nk 2\nn 3\ne 0 1\ne 1 2\n");
    }
}
