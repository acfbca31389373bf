//! Constructions of extremal and quasi-random `r`-graphs together with exact
//! and Monte Carlo machinery for counting their tight Hamiltonian cycles.
//!
//! The crate is organised bottom-up:
//!
//! - [`hypergraph`]: the `r`-graph, permutation and cyclic-window types plus
//!   the plain-text interchange format.
//! - [`counting`]: exact cycle counters (subset DP and brute force),
//!   permanents, generalized 2-factor profiles and closed-form bounds.
//! - [`constructions`]: crown graphs, complete multipartite `r`-graphs and
//!   the admissible/good word machinery.
//! - [`geometry`]: finite fields and spherical Steiner systems
//!   `S(3, q+1, q^s+1)`.
//! - [`packing`]: randomized edge-disjoint packings, disjoint-group
//!   partitioning and the partitioned families driving the builders.
//! - [`randmodels`]: random `r`-graph samplers, the quasi-random builder and
//!   the sampled quasi-randomness audit.
//! - [`estimators`]: good/bad permutation classification and the Monte Carlo
//!   estimators built on it.

pub mod combinatorics;
pub mod constructions;
pub mod counting;
pub mod estimators;
pub mod geometry;
pub mod hypergraph;
pub mod packing;
pub mod randmodels;
pub mod report;
pub mod rng;
mod textfmt;

pub use hypergraph::{CanonicalCycle, CyclicWindowSet, Edge, Hypergraph, VertexPermutation};

/// Any typed domain error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Hypergraph(#[from] hypergraph::HypergraphError),
    #[error(transparent)]
    Parse(#[from] textfmt::ParseError),
    #[error(transparent)]
    Count(#[from] counting::CountError),
    #[error(transparent)]
    Construction(#[from] constructions::ConstructionError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Packing(#[from] packing::PackingError),
    #[error(transparent)]
    RandModel(#[from] randmodels::RandModelError),
    #[error(transparent)]
    Estimate(#[from] estimators::EstimateError),
}

pub use textfmt::ParseError;
