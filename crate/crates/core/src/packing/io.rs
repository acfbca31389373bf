//! Packing text format.
//!
//! ```text
//! n r q K k z
//! v1 ... vq           (per element: its vertices,
//! e1 ... er            then z edge lines)
//! W m
//! e1 ... er           (m leftover edges)
//! ```

use std::io::{BufRead, Write};

use super::{Packing, PackingElement};
use crate::combinatorics::binomial;
use crate::hypergraph::io::write_tuple;
use crate::textfmt::{checked_set, LineReader, ParseError};

pub fn write_packing<W: Write>(p: &Packing, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {} {} {} {} {}", p.n, p.r, p.q, p.elements.len(), p.k, p.z)?;
    for el in &p.elements {
        write_tuple(&mut out, &el.vertices)?;
        for e in &el.edges {
            write_tuple(&mut out, e)?;
        }
    }
    writeln!(out, "W {}", p.leftover.len())?;
    for e in &p.leftover {
        write_tuple(&mut out, e)?;
    }
    Ok(())
}

/// Reads the format above. Checks syntax, ranges and set sizes;
/// packing properties are left to the validator.
pub fn read_packing<R: BufRead>(input: R) -> Result<Packing, ParseError> {
    let mut lines = LineReader::new(input);
    let h = lines.numbers(Some(6), "header \"n r q K k z\"")?;
    let (n, r, q, count, k, z) = (h[0], h[1], h[2], h[3], h[4], h[5]);
    if r < 2 || r > 16 || r > q || q > n || k == 0 {
        return Err(ParseError::at(
            1,
            format!("need 2 <= r <= q <= n, r <= 16 and k >= 1 (n = {n}, r = {r}, q = {q}, k = {k})"),
        ));
    }
    let max_z = binomial(q as u64, r as u64).unwrap_or(u128::MAX);
    if z as u128 > max_z {
        return Err(ParseError::at(1, format!("z = {z} exceeds C({q}, {r})")));
    }
    let mut elements = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let vs = lines.numbers(Some(q), "element vertices")?;
        let vertices = checked_set(vs, n, lines.line_no())?;
        let mut edges = Vec::with_capacity(z.min(1 << 16));
        for _ in 0..z {
            let e = lines.numbers(Some(r), "edge")?;
            edges.push(checked_set(e, n, lines.line_no())?);
        }
        elements.push(PackingElement { vertices, edges });
    }
    let m = lines.keyword_numbers("W", 1)?[0];
    let mut leftover = Vec::with_capacity(m.min(1 << 16));
    for _ in 0..m {
        let e = lines.numbers(Some(r), "leftover edge")?;
        leftover.push(checked_set(e, n, lines.line_no())?);
    }
    lines.expect_end()?;
    Ok(Packing {
        n,
        r,
        q,
        k,
        z,
        elements,
        leftover,
    })
}
