use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::partition::{partition_into_disjoint_groups, PartitionConfig};
use super::{Packing, PackingError};
use crate::combinatorics::{rsets, RSetRanker};
use crate::geometry::SteinerSystem;
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FamilyKind {
    /// Elements are the blocks of a spherical Steiner system `S(3, q+1, q^s+1)`,
    /// each carrying every triple inside it.
    Steiner { q: u32, s: u32 },
    /// Elements of a random packing plus its leftover edges.
    Packing,
    /// Every edge of `K_n^r` is its own group.
    Singletons,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyElement {
    pub vertices: Vec<usize>,
    pub edges: Vec<Vec<usize>>,
}

/// Elements grouped into `k`-sets of pairwise vertex-disjoint members, and
/// leftover edges grouped the same way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionedFamily {
    pub kind: FamilyKind,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub elements: Vec<FamilyElement>,
    /// Indices into `elements`.
    pub element_groups: Vec<Vec<usize>>,
    pub leftover: Vec<Vec<usize>>,
    /// Indices into `leftover`.
    pub leftover_groups: Vec<Vec<usize>>,
}

impl PartitionedFamily {
    pub fn from_steiner(
        sys: &SteinerSystem,
        k: usize,
        cfg: &PartitionConfig,
        rng: &mut impl Rng,
    ) -> Result<Self, PackingError> {
        let groups = partition_into_disjoint_groups(&sys.blocks, sys.n, k, cfg, rng)?;
        let elements = sys
            .blocks
            .iter()
            .map(|b| FamilyElement {
                vertices: b.clone(),
                edges: rsets(b.len(), 3).map(|t| t.iter().map(|&i| b[i]).collect()).collect(),
            })
            .collect();
        Ok(Self {
            kind: FamilyKind::Steiner { q: sys.q, s: sys.s },
            n: sys.n,
            r: 3,
            k,
            elements,
            element_groups: groups,
            leftover: Vec::new(),
            leftover_groups: Vec::new(),
        })
    }

    pub fn from_packing(p: &Packing, cfg: &PartitionConfig, rng: &mut impl Rng) -> Result<Self, PackingError> {
        let sets: Vec<Vec<usize>> = p.elements.iter().map(|e| e.vertices.clone()).collect();
        let element_groups = partition_into_disjoint_groups(&sets, p.n, p.k, cfg, rng)?;
        let leftover = super::leftover_edges(p);
        let leftover_groups = partition_into_disjoint_groups(&leftover, p.n, p.k, cfg, rng)?;
        Ok(Self {
            kind: FamilyKind::Packing,
            n: p.n,
            r: p.r,
            k: p.k,
            elements: p
                .elements
                .iter()
                .map(|e| FamilyElement {
                    vertices: e.vertices.clone(),
                    edges: e.edges.clone(),
                })
                .collect(),
            element_groups,
            leftover,
            leftover_groups,
        })
    }

    pub fn singletons(n: usize, r: usize) -> Result<Self, PackingError> {
        let small = crate::combinatorics::binomial(n as u64, r as u64).is_some_and(|c| c <= super::MAX_PACKING_EDGES);
        if r < 2 || r > n || r > 16 || !small {
            return Err(PackingError::InvalidParams(format!(
                "singleton family needs 2 <= r <= n and C(n, r) <= {}, got n = {n}, r = {r}",
                super::MAX_PACKING_EDGES
            )));
        }
        let leftover: Vec<Vec<usize>> = rsets(n, r).collect();
        Ok(Self {
            kind: FamilyKind::Singletons,
            n,
            r,
            k: 1,
            elements: Vec::new(),
            element_groups: Vec::new(),
            leftover_groups: (0..leftover.len()).map(|i| vec![i]).collect(),
            leftover,
        })
    }

    pub fn total_edges(&self) -> usize {
        RSetRanker::new(self.n, self.r).len()
    }

    /// Edges owned by an element or listed as leftover.
    pub fn owned_edges(&self) -> usize {
        self.elements.iter().map(|e| e.edges.len()).sum::<usize>() + self.leftover.len()
    }

    /// Every edge of `K_n^r` is owned. Assumes a valid family.
    pub fn is_complete(&self) -> bool {
        self.owned_edges() == self.total_edges()
    }

    /// Structural checks: well-formed sets, each edge owned once, every
    /// element and leftover edge in exactly one group of size `k`, and
    /// vertex-disjointness inside every group.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let (n, r) = (self.n, self.r);
        let set_ok = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]) && s.last().is_none_or(|&v| v < n);

        let mut bad = None;
        let small = crate::combinatorics::binomial(n as u64, r as u64).is_some_and(|c| c <= super::MAX_PACKING_EDGES);
        if r < 2 || r > n || r > 16 || self.k == 0 || !small {
            bad = Some(format!("invalid (n, r, k) = ({n}, {r}, {})", self.k));
        }
        for (i, el) in self.elements.iter().enumerate() {
            if bad.is_some() {
                break;
            }
            if !set_ok(&el.vertices) || el.vertices.is_empty() {
                bad = Some(format!("element {i} has invalid vertex list {:?}", el.vertices));
            } else if let Some(e) = el
                .edges
                .iter()
                .find(|e| e.len() != r || !set_ok(e) || e.iter().any(|v| el.vertices.binary_search(v).is_err()))
            {
                bad = Some(format!("element {i} has invalid edge {e:?}"));
            }
        }
        if bad.is_none() {
            if let Some(e) = self.leftover.iter().find(|e| e.len() != r || !set_ok(e)) {
                bad = Some(format!("invalid leftover edge {e:?}"));
            }
        }
        let well_formed = bad.is_none();
        report.push("well_formed", bad);

        let mut bad = None;
        if well_formed {
            let mut owner: HashMap<&[usize], ()> = HashMap::new();
            for e in self.elements.iter().flat_map(|el| &el.edges).chain(&self.leftover) {
                if owner.insert(e, ()).is_some() {
                    bad = Some(format!("edge {e:?} is owned twice"));
                    break;
                }
            }
        } else {
            bad = Some("skipped: malformed family".into());
        }
        report.push("edge_disjoint", bad);

        let groups = [
            ("element", &self.element_groups, self.elements.len()),
            ("leftover", &self.leftover_groups, self.leftover.len()),
        ];
        let mut bad = None;
        for (what, gs, len) in groups {
            let mut seen = vec![false; len];
            for (gi, g) in gs.iter().enumerate() {
                if g.len() != self.k {
                    bad = Some(format!("{what} group {gi} has {} members, expected {}", g.len(), self.k));
                } else if let Some(&x) = g.iter().find(|&&x| x >= len || std::mem::replace(&mut seen[x], true)) {
                    bad = Some(format!("{what} {x} is out of range or grouped twice"));
                }
                if bad.is_some() {
                    break;
                }
            }
            if bad.is_none() {
                if let Some(x) = seen.iter().position(|s| !s) {
                    bad = Some(format!("{what} {x} is in no group"));
                }
            }
            if bad.is_some() {
                break;
            }
        }
        let grouped = bad.is_none();
        report.push("group_cover", bad);

        let mut bad = None;
        if grouped && well_formed {
            let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|v| b.binary_search(v).is_err());
            'outer: for (what, gs) in [("element", &self.element_groups), ("leftover", &self.leftover_groups)] {
                for (gi, g) in gs.iter().enumerate() {
                    let sets: Vec<&[usize]> = g
                        .iter()
                        .map(|&x| match what {
                            "element" => self.elements[x].vertices.as_slice(),
                            _ => self.leftover[x].as_slice(),
                        })
                        .collect();
                    for a in 0..sets.len() {
                        for b in 0..a {
                            if !disjoint(sets[a], sets[b]) {
                                bad = Some(format!("{what} group {gi}: members {} and {} intersect", g[b], g[a]));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        } else {
            bad = Some("skipped: grouping invalid".into());
        }
        report.push("group_disjoint", bad);
        report
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    /// Parses and structurally validates a family.
    pub fn from_json(s: &str) -> Result<Self, PackingError> {
        let f: Self = serde_json::from_str(s).map_err(|e| PackingError::InvalidFamily(e.to_string()))?;
        let report = f.validate();
        if !report.pass {
            return Err(PackingError::InvalidFamily(report.summary()));
        }
        Ok(f)
    }

    pub fn index(&self) -> FamilyIndex {
        FamilyIndex::new(self)
    }
}

/// Where an edge lives in a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Element { element: usize, group: usize },
    Leftover { edge: usize, group: usize },
}

/// Edge -> owner lookup, dense for small `C(n, r)`.
pub struct FamilyIndex {
    ranker: RSetRanker,
    dense: Vec<u32>,
    sparse: HashMap<usize, u32>,
    elements: usize,
    element_group: Vec<usize>,
    leftover_group: Vec<usize>,
}

const DENSE_LIMIT: usize = 1 << 26;
const NONE: u32 = u32::MAX;

impl FamilyIndex {
    fn new(f: &PartitionedFamily) -> Self {
        let ranker = RSetRanker::new(f.n, f.r);
        let dense_ok = ranker.len() <= DENSE_LIMIT;
        let mut idx = Self {
            dense: if dense_ok { vec![NONE; ranker.len()] } else { Vec::new() },
            sparse: HashMap::new(),
            elements: f.elements.len(),
            element_group: vec![usize::MAX; f.elements.len()],
            leftover_group: vec![usize::MAX; f.leftover.len()],
            ranker,
        };
        let owned = f
            .elements
            .iter()
            .enumerate()
            .flat_map(|(i, el)| el.edges.iter().map(move |e| (e, i)))
            .chain(f.leftover.iter().enumerate().map(|(j, e)| (e, f.elements.len() + j)));
        for (e, code) in owned {
            let rank = idx.ranker.rank(e);
            if dense_ok {
                idx.dense[rank] = code as u32;
            } else {
                idx.sparse.insert(rank, code as u32);
            }
        }
        for (g, members) in f.element_groups.iter().enumerate() {
            for &x in members {
                idx.element_group[x] = g;
            }
        }
        for (g, members) in f.leftover_groups.iter().enumerate() {
            for &x in members {
                idx.leftover_group[x] = g;
            }
        }
        idx
    }

    pub fn ranker(&self) -> &RSetRanker {
        &self.ranker
    }

    /// Owner of an edge given as distinct vertices in any order.
    pub fn owner(&self, vertices: &[usize]) -> Option<Owner> {
        let rank = self.ranker.rank_unsorted(vertices);
        let code = if self.dense.is_empty() {
            *self.sparse.get(&rank)?
        } else {
            self.dense[rank]
        };
        if code == NONE {
            return None;
        }
        let code = code as usize;
        Some(if code < self.elements {
            Owner::Element {
                element: code,
                group: self.element_group[code],
            }
        } else {
            let edge = code - self.elements;
            Owner::Leftover {
                edge,
                group: self.leftover_group[edge],
            }
        })
    }
}
