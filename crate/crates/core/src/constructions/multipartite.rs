use std::ops::Range;

use itertools::Itertools;

use super::ConstructionError;
use crate::Hypergraph;

/// Balanced complete `k`-partite `r`-graph `T_r(n, k)`. Parts are contiguous
/// vertex ranges; the `⌊n/k⌋`-sized parts come first.
#[derive(Clone, Debug)]
pub struct MultipartiteRGraph {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub parts: Vec<Range<usize>>,
    pub graph: Hypergraph,
}

impl MultipartiteRGraph {
    pub fn part_of(&self, v: usize) -> usize {
        self.parts.partition_point(|p| p.end <= v)
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len()).collect()
    }
}

pub fn multipartite_rgraph(n: usize, k: usize, r: usize) -> Result<MultipartiteRGraph, ConstructionError> {
    if r < 2 || k < r {
        return Err(ConstructionError::InvalidParams(format!("need k >= r >= 2, got k = {k}, r = {r}")));
    }
    if n < k {
        return Err(ConstructionError::TooSmall { n, min: k });
    }
    let small = k - n % k;
    let small = if small == k { k } else { small };
    let mut parts = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = n / k + usize::from(i >= small);
        parts.push(start..start + len);
        start += len;
    }
    let mut edges = Vec::new();
    for chosen in (0..k).combinations(r) {
        for e in chosen.iter().map(|&i| parts[i].clone()).multi_cartesian_product() {
            edges.push(e);
        }
    }
    let graph = Hypergraph::new(n, r, edges).expect("transversals are valid edges");
    Ok(MultipartiteRGraph { n, k, r, parts, graph })
}

/// `T(n, k)`, the `r = 2` case.
pub fn turan_graph(n: usize, k: usize) -> Result<MultipartiteRGraph, ConstructionError> {
    multipartite_rgraph(n, k, 2)
}
