//! Plain-text hypergraph format.
//!
//! ```text
//! n r m
//! v1 v2 ... vr      (m lines, strictly increasing on output)
//! ```
//!
//! LF line endings, single spaces, no trailing whitespace.

use std::io::{BufRead, Write};

use super::{Edge, Hypergraph};
use crate::textfmt::{checked_set, LineReader, ParseError};

pub fn read_hypergraph<R: BufRead>(input: R) -> Result<Hypergraph, ParseError> {
    let mut lines = LineReader::new(input);
    let header = lines.numbers(Some(3), "header \"n r m\"")?;
    let (n, r, m) = (header[0], header[1], header[2]);
    if r < 2 || r > n {
        return Err(ParseError::at(1, format!("uniformity r = {r} must satisfy 2 <= r <= n = {n}")));
    }
    let mut g = Hypergraph::empty(n, r).expect("checked above");
    for _ in 0..m {
        let edge = lines.numbers(Some(r), "edge")?;
        let line = lines.line_no();
        let edge = checked_set(edge, n, line)?;
        if g.contains(&edge) {
            return Err(ParseError::at(line, format!("duplicate edge {edge:?}")));
        }
        g.edges.insert(Edge::from_sorted_unchecked(edge));
    }
    lines.expect_end()?;
    Ok(g)
}

pub fn write_hypergraph<W: Write>(g: &Hypergraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {} {}", g.n(), g.r(), g.edge_count())?;
    for e in g.edges() {
        write_tuple(&mut out, e.vertices())?;
    }
    Ok(())
}

pub(crate) fn write_tuple<W: Write>(out: &mut W, vs: &[usize]) -> std::io::Result<()> {
    let mut first = true;
    for v in vs {
        if !first {
            out.write_all(b" ")?;
        }
        write!(out, "{v}")?;
        first = false;
    }
    out.write_all(b"\n")
}
