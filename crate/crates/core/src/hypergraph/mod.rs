//! `r`-uniform hypergraphs, vertex permutations and the cyclic windows that
//! turn a permutation into a candidate tight Hamiltonian cycle.

pub(crate) mod io;

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;

use crate::combinatorics::binomial;

pub use io::{read_hypergraph, write_hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("uniformity r = {r} must satisfy 2 <= r <= n = {n}")]
    BadUniformity { n: usize, r: usize },
    #[error("edge {edge:?} has {len} vertices, expected {r}")]
    WrongEdgeSize { edge: Vec<usize>, len: usize, r: usize },
    #[error("edge {edge:?} repeats a vertex")]
    RepeatedVertex { edge: Vec<usize> },
    #[error("edge {edge:?} has a vertex outside 0..{n}")]
    VertexOutOfRange { edge: Vec<usize>, n: usize },
    #[error("duplicate edge {edge:?}")]
    DuplicateEdge { edge: Vec<usize> },
    #[error("sequence {order:?} is not a permutation of 0..{n}")]
    NotAPermutation { order: Vec<usize>, n: usize },
    #[error("cycle needs n >= r + 2 (n = {n}, r = {r})")]
    DegenerateCycle { n: usize, r: usize },
}

/// An edge: a strictly increasing tuple of vertex indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Box<[usize]>);

impl Edge {
    /// Builds an edge from any arrangement of distinct vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self, HypergraphError> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(HypergraphError::RepeatedVertex { edge: vertices });
        }
        Ok(Self(vertices.into_boxed_slice()))
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices.into_boxed_slice())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        // Both sorted: merge walk.
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl Borrow<[usize]> for Edge {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// An `r`-uniform hypergraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: BTreeSet<Edge>,
}

impl Hypergraph {
    pub fn empty(n: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 || r > n {
            return Err(HypergraphError::BadUniformity { n, r });
        }
        Ok(Self {
            n,
            r,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a hypergraph, validating every edge. Duplicates are an error.
    pub fn new<I, E>(n: usize, r: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Vec<usize>>,
    {
        let mut g = Self::empty(n, r)?;
        for e in edges {
            g.insert(e.into())?;
        }
        Ok(g)
    }

    /// Builds from pre-validated edges, silently merging duplicates.
    pub(crate) fn from_edges_unchecked(n: usize, r: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        debug_assert!(edges.iter().all(|e| e.len() == r && e.0.iter().all(|&v| v < n)));
        Self { n, r, edges }
    }

    pub fn complete(n: usize, r: usize) -> Result<Self, HypergraphError> {
        Self::empty(n, r)?;
        Ok(Self::from_edges_unchecked(
            n,
            r,
            crate::combinatorics::rsets(n, r).map(Edge::from_sorted_unchecked),
        ))
    }

    /// Inserts an edge; inserting an existing edge is an error.
    pub fn insert(&mut self, vertices: Vec<usize>) -> Result<(), HypergraphError> {
        let edge = self.check_edge(vertices)?;
        if self.edges.contains(&edge) {
            return Err(HypergraphError::DuplicateEdge { edge: edge.0.into_vec() });
        }
        self.edges.insert(edge);
        Ok(())
    }

    pub fn remove(&mut self, sorted: &[usize]) -> bool {
        self.edges.remove(sorted)
    }

    fn check_edge(&self, vertices: Vec<usize>) -> Result<Edge, HypergraphError> {
        if vertices.len() != self.r {
            return Err(HypergraphError::WrongEdgeSize {
                len: vertices.len(),
                edge: vertices,
                r: self.r,
            });
        }
        if vertices.iter().any(|&v| v >= self.n) {
            return Err(HypergraphError::VertexOutOfRange { edge: vertices, n: self.n });
        }
        Edge::new(vertices)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    /// Membership test for a strictly increasing vertex tuple.
    pub fn contains(&self, sorted: &[usize]) -> bool {
        self.edges.contains(sorted)
    }

    /// `C(n, r)`; `None` if it overflows.
    pub fn possible_edges(&self) -> Option<u128> {
        binomial(self.n as u64, self.r as u64)
    }

    /// `|E| / C(n, r)`.
    pub fn density(&self) -> f64 {
        match self.possible_edges() {
            Some(total) if total > 0 => self.edges.len() as f64 / total as f64,
            _ => 0.0,
        }
    }

    /// True when every window of the permutation is an edge.
    pub fn has_cycle(&self, pi: &VertexPermutation) -> bool {
        if pi.len() != self.n {
            return false;
        }
        let mut buf = vec![0usize; self.r];
        (0..self.n).all(|i| {
            pi.fill_window(i, self.r, &mut buf);
            self.contains(&buf)
        })
    }
}

/// An ordering of the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexPermutation(Vec<usize>);

impl VertexPermutation {
    pub fn new(order: Vec<usize>) -> Result<Self, HypergraphError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(HypergraphError::NotAPermutation { order, n });
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut v = self.0.clone();
        let len = v.len();
        if len > 0 {
            v.rotate_left(by % len);
        }
        Self(v)
    }

    /// Writes window `start` (`r` cyclically consecutive vertices) into `buf`, sorted.
    pub(crate) fn fill_window(&self, start: usize, r: usize, buf: &mut [usize]) {
        let n = self.0.len();
        for (j, slot) in buf.iter_mut().enumerate().take(r) {
            *slot = self.0[(start + j) % n];
        }
        buf[..r].sort_unstable();
    }

    /// The `r`-set of this permutation: its `n` cyclic windows of length `r`.
    pub fn window_set(&self, r: usize) -> Result<CyclicWindowSet, HypergraphError> {
        let n = self.0.len();
        if r < 2 || n < r + 2 {
            return Err(HypergraphError::DegenerateCycle { n, r });
        }
        let windows = (0..n)
            .map(|i| {
                let mut buf = vec![0; r];
                self.fill_window(i, r, &mut buf);
                Edge::from_sorted_unchecked(buf)
            })
            .collect();
        Ok(CyclicWindowSet {
            windows,
            source: self.clone(),
        })
    }

    /// Lexicographically least of the `2n` rotations and reversals.
    pub fn canonicalize(&self) -> Result<CanonicalCycle, HypergraphError> {
        let n = self.0.len();
        if n < 3 {
            return Err(HypergraphError::DegenerateCycle { n, r: 1 });
        }
        // The minimum label must come first; then the smaller neighbour next.
        let start = (0..n).min_by_key(|&i| self.0[i]).expect("n >= 3");
        let next = self.0[(start + 1) % n];
        let prev = self.0[(start + n - 1) % n];
        let order = if next < prev {
            (0..n).map(|j| self.0[(start + j) % n]).collect()
        } else {
            (0..n).map(|j| self.0[(start + n - j) % n]).collect()
        };
        Ok(CanonicalCycle(VertexPermutation(order)))
    }
}

/// The `n` cyclic length-`r` windows of a permutation, each stored sorted,
/// in order of starting position.
#[derive(Clone, Debug)]
pub struct CyclicWindowSet {
    windows: Vec<Edge>,
    source: VertexPermutation,
}

impl CyclicWindowSet {
    pub fn windows(&self) -> &[Edge] {
        &self.windows
    }

    pub fn source(&self) -> &VertexPermutation {
        &self.source
    }

    /// The windows as a set, for comparing cycles independently of the source.
    pub fn as_set(&self) -> BTreeSet<Edge> {
        self.windows.iter().cloned().collect()
    }

    pub fn is_subset_of(&self, g: &Hypergraph) -> bool {
        self.windows.iter().all(|w| g.contains(w.vertices()))
    }
}

/// Representative of a tight Hamiltonian cycle: the lexicographically least
/// permutation among the `2n` rotations and reversals that trace it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalCycle(VertexPermutation);

impl CanonicalCycle {
    pub fn representative(&self) -> &VertexPermutation {
        &self.0
    }
}
