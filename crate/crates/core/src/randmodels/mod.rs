//! Random `r`-graph models, the partition-driven quasi-random builder and a
//! sampled quasi-randomness audit.

mod audit;
mod builder;

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, rsets, RSetRanker};
use crate::hypergraph::HypergraphError;
use crate::Hypergraph;

pub use audit::{audit_quasirandomness, AuditReport, QuasiRandomParams};
pub use builder::build_quasirandom_from_partition;

/// Largest `C(n, r)` the samplers enumerate.
pub const MAX_SAMPLER_EDGES: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RandModelError {
    #[error("probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("edge count {m} out of range 0..={max}")]
    EdgeCountOutOfRange { m: u128, max: u128 },
    #[error("p * C(n, r) = {num} * {total} / {den} is not an integer")]
    NotIntegral { num: u64, den: u64, total: u128 },
    #[error("graph has {have} edges, {need} requested")]
    TooFewEdges { have: usize, need: usize },
    #[error("family groups have {family} members but the density denominator is {spec}")]
    GroupSizeMismatch { family: usize, spec: u64 },
    #[error("audit needs n >= 4, got {0}")]
    TooSmall(usize),
    #[error("scale limit: {0}")]
    ScaleLimit(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// A density `num / den` with `0 < num < den`, stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DensitySpec {
    pub num: u64,
    pub den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl DensitySpec {
    /// Reduces to lowest terms.
    pub fn new(num: u64, den: u64) -> Result<Self, RandModelError> {
        if num == 0 || num >= den {
            return Err(RandModelError::InvalidDensity(format!("{num}/{den} is not strictly between 0 and 1")));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// Parses `NUM/DEN`.
    pub fn parse(s: &str) -> Result<Self, RandModelError> {
        let bad = || RandModelError::InvalidDensity(format!("expected NUM/DEN, got {s:?}"));
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        let num = a.parse().map_err(|_| bad())?;
        let den = b.parse().map_err(|_| bad())?;
        Self::new(num, den)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `p * total` if it is an integer.
    pub fn scale(&self, total: u128) -> Result<u128, RandModelError> {
        let prod = total * self.num as u128;
        if prod % self.den as u128 != 0 {
            return Err(RandModelError::NotIntegral {
                num: self.num,
                den: self.den,
                total,
            });
        }
        Ok(prod / self.den as u128)
    }
}

impl fmt::Display for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn edge_total(n: usize, r: usize) -> Result<u128, RandModelError> {
    // surface bad (n, r) as the hypergraph error
    Hypergraph::empty(n, r)?;
    match binomial(n as u64, r as u64) {
        Some(c) if c <= MAX_SAMPLER_EDGES => Ok(c),
        _ => Err(RandModelError::ScaleLimit(format!("C({n}, {r}) exceeds {MAX_SAMPLER_EDGES}"))),
    }
}

/// `G_r(n, p)`: every `r`-set independently with probability `p`, drawn in
/// lexicographic edge order.
pub fn sample_gnp(n: usize, r: usize, p: f64, rng: &mut impl Rng) -> Result<Hypergraph, RandModelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RandModelError::InvalidProbability(p));
    }
    edge_total(n, r)?;
    let edges: Vec<Vec<usize>> = rsets(n, r).filter(|_| rng.gen_bool(p)).collect();
    Ok(Hypergraph::new(n, r, edges)?)
}

/// `G_r(n, m)`: a uniform `m`-subset of the `r`-sets.
pub fn sample_gnm(n: usize, r: usize, m: u128, rng: &mut impl Rng) -> Result<Hypergraph, RandModelError> {
    let total = edge_total(n, r)?;
    if m > total {
        return Err(RandModelError::EdgeCountOutOfRange { m, max: total });
    }
    let ranker = RSetRanker::new(n, r);
    let edges: Vec<Vec<usize>> = sample(rng, total as usize, m as usize)
        .into_iter()
        .map(|i| ranker.unrank(i))
        .collect();
    Ok(Hypergraph::new(n, r, edges)?)
}

/// Uniform spanning subgraph of `g` with exactly `p * C(n, r)` edges.
/// Selection sampling over the edge order of `g`.
pub fn sample_exact_density_subgraph(
    g: &Hypergraph,
    p: DensitySpec,
    rng: &mut impl Rng,
) -> Result<Hypergraph, RandModelError> {
    let total = edge_total(g.n(), g.r())?;
    let need = p.scale(total)? as usize;
    let have = g.edge_count();
    if have < need {
        return Err(RandModelError::TooFewEdges { have, need });
    }
    let mut left = need;
    let mut out = Hypergraph::empty(g.n(), g.r())?;
    for (seen, e) in g.edges().enumerate() {
        if left == 0 {
            break;
        }
        if rng.gen_range(0..have - seen) < left {
            out.insert(e.vertices().to_vec())?;
            left -= 1;
        }
    }
    Ok(out)
}
