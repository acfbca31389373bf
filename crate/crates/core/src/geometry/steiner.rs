//! Spherical Steiner systems `S(3, q+1, q^s+1)`.
//!
//! Points are the projective line over GF(q^s); blocks are the images of the
//! subline `GF(q) ∪ {∞}` under fractional linear maps. Three distinct points
//! determine exactly one such image, so blocks are generated triple by
//! triple: the first uncovered triple `(a, b, c)` gives the block
//! `φ(GF(q) ∪ {∞})` where `φ` maps `∞, 0, 1` to `a, b, c`.

use std::io::{BufRead, Write};

use itertools::Itertools;

use super::field::{prime_power, FieldCtx};
use super::projective::{Mobius, ProjectivePoint};
use super::GeometryError;
use crate::combinatorics::{binomial_usize, RSetRanker};
use crate::hypergraph::io::write_tuple;
use crate::report::ValidationReport;
use crate::textfmt::{checked_set, LineReader, ParseError};

/// Largest `q^s` accepted; coverage is tracked over all `C(q^s + 1, 3)` triples.
pub const MAX_STEINER_POINTS: u32 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerSystem {
    pub q: u32,
    pub s: u32,
    pub n: usize,
    /// Sorted blocks in lexicographic order.
    pub blocks: Vec<Vec<usize>>,
}

impl SteinerSystem {
    pub fn block_size(&self) -> usize {
        self.q as usize + 1
    }

    pub fn expected_block_count(&self) -> usize {
        binomial_usize(self.n, 3) / binomial_usize(self.block_size(), 3)
    }

    pub fn expected_point_degree(&self) -> usize {
        binomial_usize(self.n - 1, 2) / binomial_usize(self.q as usize, 2)
    }
}

pub fn build_spherical_steiner(q: u32, s: u32) -> Result<SteinerSystem, GeometryError> {
    if prime_power(q).is_none() {
        return Err(GeometryError::InvalidParams(format!("q = {q} is not a prime power")));
    }
    if s < 2 {
        return Err(GeometryError::InvalidParams(format!("s = {s} must be at least 2")));
    }
    let big = q
        .checked_pow(s)
        .filter(|&v| v <= MAX_STEINER_POINTS)
        .ok_or_else(|| GeometryError::ScaleLimit(format!("q^s = {q}^{s} exceeds {MAX_STEINER_POINTS}")))?;
    let field = FieldCtx::new(big)?;
    let sub: Vec<ProjectivePoint> = std::iter::once(ProjectivePoint::Infinity)
        .chain(field.subfield(q)?.into_iter().map(ProjectivePoint::Finite))
        .collect();
    let n = big as usize + 1;
    let ranker = RSetRanker::new(n, 3);
    let mut covered = vec![false; ranker.len()];
    let mut blocks = Vec::new();
    for tri in (0..n).combinations(3) {
        if covered[ranker.rank(&tri)] {
            continue;
        }
        let phi = Mobius::through(
            &field,
            ProjectivePoint::from_index(tri[0]),
            tri[1] as u32 - 1,
            tri[2] as u32 - 1,
        );
        let mut block: Vec<usize> = sub.iter().map(|&x| phi.apply(&field, x).index()).collect();
        block.sort_unstable();
        for t in block.iter().copied().combinations(3) {
            let rk = ranker.rank(&t);
            if covered[rk] {
                return Err(GeometryError::ConstructionBug(format!(
                    "triple {t:?} covered twice while adding block {block:?}"
                )));
            }
            covered[rk] = true;
        }
        blocks.push(block);
    }
    blocks.sort();
    let sys = SteinerSystem { q, s, n, blocks };
    let report = verify_steiner(&sys);
    if !report.pass {
        return Err(GeometryError::ConstructionBug(report.summary()));
    }
    Ok(sys)
}

/// Exhaustive check of block sizes, distinctness, triple coverage, block
/// count and point degrees.
pub fn verify_steiner(sys: &SteinerSystem) -> ValidationReport {
    let n = sys.n;
    let k = sys.block_size();
    let mut report = ValidationReport::new();
    if n > MAX_STEINER_POINTS as usize + 1 {
        report.push("point_count", Some(format!("n = {n} exceeds {} points", MAX_STEINER_POINTS as usize + 1)));
        return report;
    }
    let mut push = |name, bad: Option<String>| report.push(name, bad);

    let bad_block = sys
        .blocks
        .iter()
        .find(|b| b.len() != k || b.windows(2).any(|w| w[0] >= w[1]) || b.iter().any(|&v| v >= n));
    push("block_sizes", bad_block.map(|b| format!("block {b:?} is not a sorted {k}-subset of 0..{n}")));

    let mut sorted: Vec<&Vec<usize>> = sys.blocks.iter().collect();
    sorted.sort();
    let dup = sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]);
    push("distinct_blocks", dup.map(|b| format!("block {b:?} appears more than once")));

    let ranker = RSetRanker::new(n, 3);
    let mut cover = vec![0u32; ranker.len()];
    for b in sys.blocks.iter().filter(|b| b.iter().all(|&v| v < n)) {
        for t in b.iter().copied().combinations(3) {
            if t[0] < t[1] && t[1] < t[2] {
                cover[ranker.rank(&t)] += 1;
            }
        }
    }
    let bad_triple = cover.iter().position(|&c| c != 1).map(|rk| {
        let t = ranker.unrank(rk);
        format!("triple {t:?} covered {} times", cover[rk])
    });
    push("triple_coverage", bad_triple);

    let expected = sys.expected_block_count();
    push(
        "block_count",
        (sys.blocks.len() != expected).then(|| format!("{} blocks, expected {expected}", sys.blocks.len())),
    );

    let mut degree = vec![0usize; n];
    for b in &sys.blocks {
        for &v in b.iter().filter(|&&v| v < n) {
            degree[v] += 1;
        }
    }
    let want = sys.expected_point_degree();
    let bad_point = degree.iter().position(|&d| d != want);
    push(
        "point_degree",
        bad_point.map(|v| format!("point {v} lies in {} blocks, expected {want}", degree[v])),
    );

    report
}

/// Design file: header `n q s b`, then `b` lines of `q+1` sorted points.
pub fn write_design<W: Write>(sys: &SteinerSystem, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {} {} {}", sys.n, sys.q, sys.s, sys.blocks.len())?;
    for b in &sys.blocks {
        write_tuple(&mut out, b)?;
    }
    Ok(())
}

/// Reads a design file. Only the format is checked here; use
/// [`verify_steiner`] for the design properties.
pub fn read_design<R: BufRead>(input: R) -> Result<SteinerSystem, ParseError> {
    let mut lines = LineReader::new(input);
    let h = lines.numbers(Some(4), "header \"n q s b\"")?;
    let (n, q, s, b) = (h[0], h[1], h[2], h[3]);
    if q < 2 || q > n || s < 1 {
        return Err(ParseError::at(1, format!("invalid design parameters q = {q}, s = {s}, n = {n}")));
    }
    let fits = u32::try_from(q)
        .ok()
        .zip(u32::try_from(s).ok())
        .and_then(|(q, s)| q.checked_pow(s))
        .is_some_and(|v| v as usize + 1 == n);
    if !fits {
        return Err(ParseError::at(1, format!("n = {n} is not q^s + 1 for q = {q}, s = {s}")));
    }
    let mut blocks = Vec::with_capacity(b.min(1 << 20));
    for _ in 0..b {
        let vs = lines.numbers(Some(q + 1), "block")?;
        let line = lines.line_no();
        blocks.push(checked_set(vs, n, line)?);
    }
    lines.expect_end()?;
    Ok(SteinerSystem {
        q: q as u32,
        s: s as u32,
        n,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Every image of the subline under every invertible map, deduplicated.
    fn orbit_oracle(q: u32, s: u32) -> BTreeSet<Vec<usize>> {
        let f = FieldCtx::new(q.pow(s)).unwrap();
        let sub: Vec<ProjectivePoint> = std::iter::once(ProjectivePoint::Infinity)
            .chain(f.subfield(q).unwrap().into_iter().map(ProjectivePoint::Finite))
            .collect();
        let mut out = BTreeSet::new();
        let order = f.order();
        for (a, b, c, d) in itertools::iproduct!(0..order, 0..order, 0..order, 0..order) {
            let m = Mobius { a, b, c, d };
            if !m.is_invertible(&f) {
                continue;
            }
            let mut blk: Vec<usize> = sub.iter().map(|&x| m.apply(&f, x).index()).collect();
            blk.sort_unstable();
            out.insert(blk);
        }
        out
    }

    #[test]
    fn known_block_counts() {
        let s5 = build_spherical_steiner(2, 2).unwrap();
        assert_eq!(s5.blocks.len(), 10);
        assert_eq!(s5.blocks, (0..5).combinations(3).collect::<Vec<_>>());
        let s10 = build_spherical_steiner(3, 2).unwrap();
        assert_eq!(s10.blocks.len(), 30);
        assert_eq!(s10.expected_point_degree(), 12);
        let s17 = build_spherical_steiner(2, 4).unwrap();
        assert_eq!(s17.blocks.len(), 680);
        // q^3 (q^6 + q^4 + q^2 + 1) at q = 2
        assert_eq!(8 * (64 + 16 + 4 + 1), 680);
        for q in [2u64, 3, 4] {
            let n = q.pow(4) + 1;
            let paper = q.pow(3) * (q.pow(6) + q.pow(4) + q.pow(2) + 1);
            let ratio = crate::combinatorics::binomial(n, 3).unwrap() / crate::combinatorics::binomial(q + 1, 3).unwrap();
            assert_eq!(paper as u128, ratio);
        }
    }

    #[test]
    fn more_designs_validate() {
        for (q, s) in [(2, 3), (4, 2), (5, 2), (2, 5), (3, 3), (7, 2), (8, 2), (4, 3)] {
            let sys = build_spherical_steiner(q, s).unwrap();
            assert!(verify_steiner(&sys).pass, "q={q} s={s}");
            assert_eq!(sys.blocks.len(), sys.expected_block_count());
        }
    }

    #[test]
    fn triple_driven_matches_full_group_orbit() {
        for (q, s) in [(2, 2), (3, 2), (2, 3), (2, 4), (4, 2)] {
            let built: BTreeSet<Vec<usize>> = build_spherical_steiner(q, s).unwrap().blocks.into_iter().collect();
            assert_eq!(built, orbit_oracle(q, s), "q={q} s={s}");
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(build_spherical_steiner(6, 2), Err(GeometryError::InvalidParams(_))));
        assert!(matches!(build_spherical_steiner(2, 1), Err(GeometryError::InvalidParams(_))));
        assert!(matches!(build_spherical_steiner(2, 11), Err(GeometryError::ScaleLimit(_))));
    }

    #[test]
    fn mutations_are_caught() {
        let sys = build_spherical_steiner(3, 2).unwrap();
        let mut missing = sys.clone();
        missing.blocks.pop();
        let rep = verify_steiner(&missing);
        assert!(!rep.pass);
        assert!(rep.check("triple_coverage").unwrap().counterexample.as_ref().unwrap().contains("0 times"));
        let mut dup = sys.clone();
        dup.blocks.push(sys.blocks[0].clone());
        let rep = verify_steiner(&dup);
        assert!(!rep.check("distinct_blocks").unwrap().pass);
        assert!(rep.check("triple_coverage").unwrap().counterexample.as_ref().unwrap().contains("2 times"));
    }

    #[test]
    fn design_file_round_trip() {
        let sys = build_spherical_steiner(3, 2).unwrap();
        let mut buf = Vec::new();
        write_design(&sys, &mut buf).unwrap();
        assert!(buf.starts_with(b"10 3 2 30\n"));
        assert_eq!(read_design(buf.as_slice()).unwrap(), sys);
        assert_eq!(read_design("10 3 2 1\n0 1 2\n".as_bytes()).unwrap_err().line, 2);
        assert_eq!(read_design("11 3 2 0\n".as_bytes()).unwrap_err().line, 1);
    }
}
