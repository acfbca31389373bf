use std::collections::HashMap;

use super::{Packing, PackingParams};
use crate::combinatorics::{rsets, RSetRanker};
use crate::report::ValidationReport;

/// First subset `X` of `vertices` (1 <= |X| <= r-1) whose degree among
/// `edges` falls below `threshold(|X|)`, plus the number of such subsets.
/// `vertices` must be sorted and contain every edge.
pub(super) fn degree_shortfall<'a>(
    vertices: &[usize],
    edges: impl IntoIterator<Item = &'a [usize]>,
    r: usize,
    threshold: impl Fn(usize) -> f64,
) -> (usize, Option<(Vec<usize>, usize, f64)>) {
    let q = vertices.len();
    let rankers: Vec<RSetRanker> = (0..r).map(|s| RSetRanker::new(q, s)).collect();
    let mut degree: Vec<Vec<usize>> = rankers.iter().map(|rk| vec![0; rk.len()]).collect();
    let mut local = vec![0usize; r];
    let mut sub = Vec::with_capacity(r);
    for e in edges {
        for (l, v) in local.iter_mut().zip(e) {
            *l = vertices.binary_search(v).expect("edge inside element");
        }
        for bits in 1..(1u32 << r) - 1 {
            sub.clear();
            sub.extend((0..r).filter(|i| bits >> i & 1 == 1).map(|i| local[i]));
            degree[sub.len()][rankers[sub.len()].rank(&sub)] += 1;
        }
    }
    let mut short = 0;
    let mut first = None;
    for s in 1..r {
        let need = threshold(s);
        for x in rsets(q, s) {
            let d = degree[s][rankers[s].rank(&x)];
            if (d as f64) + 1e-9 < need {
                short += 1;
                if first.is_none() {
                    first = Some((x.iter().map(|&i| vertices[i]).collect(), d, need));
                }
            }
        }
    }
    (short, first)
}

fn is_valid_set(e: &[usize], r: usize, n: usize) -> bool {
    e.len() == r && e.windows(2).all(|w| w[0] < w[1]) && e.last().is_some_and(|&v| v < n)
}

/// Checks the five packing properties, pairwise edge-disjointness and the
/// leftover bookkeeping. Every subset of every element is examined.
pub fn validate_packing(p: &Packing, params: &PackingParams) -> ValidationReport {
    let mut report = ValidationReport::new();
    let (n, r) = (p.n, p.r);
    let q = params.q();

    let mut bad = None;
    if (p.n, p.r, p.q, p.k) != (params.n, params.r, q, params.k) {
        bad = Some(format!(
            "packing has (n, r, q, k) = ({}, {}, {}, {}), parameters say ({}, {}, {}, {})",
            p.n, p.r, p.q, p.k, params.n, params.r, q, params.k
        ));
    }
    for (i, el) in p.elements.iter().enumerate() {
        if bad.is_some() {
            break;
        }
        if el.vertices.len() != q || !el.vertices.windows(2).all(|w| w[0] < w[1]) || el.vertices.iter().any(|&v| v >= n) {
            bad = Some(format!("element {i} has vertex list {:?}, expected {q} distinct sorted vertices", el.vertices));
        } else if let Some(e) = el
            .edges
            .iter()
            .find(|e| !is_valid_set(e, r, n) || e.iter().any(|v| el.vertices.binary_search(v).is_err()))
        {
            bad = Some(format!("element {i} has edge {e:?} outside its vertex set"));
        }
    }
    let structural = bad.is_none();
    report.push("element_order", bad);

    let mut bad = None;
    if structural {
        for (i, el) in p.elements.iter().enumerate() {
            let (_, first) = degree_shortfall(&el.vertices, el.edges.iter().map(Vec::as_slice), r, |s| params.threshold(s));
            if let Some((x, d, need)) = first {
                bad = Some(format!("element {i}: X = {x:?} has degree {d} < {need}"));
                break;
            }
        }
    } else {
        bad = Some("skipped: element structure invalid".into());
    }
    report.push("min_degree", bad);

    let total = RSetRanker::new(n, r).len();
    let covered = p.covered_edges();
    report.push(
        "half_coverage",
        (2 * covered > total).then(|| format!("{covered} of {total} edges covered")),
    );

    let count = p.elements.len();
    let bad = if (count as f64) + 1e-9 < params.min_count() {
        Some(format!("{count} elements, need at least {}", params.min_count()))
    } else if count % params.k != 0 {
        Some(format!("{count} elements is not a multiple of k = {}", params.k))
    } else {
        None
    };
    report.push("element_count", bad);

    let bad = p
        .elements
        .iter()
        .position(|el| el.edges.len() != p.z)
        .map(|i| format!("element {i} has {} edges, expected z = {}", p.elements[i].edges.len(), p.z));
    report.push("equal_edge_counts", bad);

    let mut owner: HashMap<&[usize], usize> = HashMap::new();
    let mut bad = None;
    'outer: for (i, el) in p.elements.iter().enumerate() {
        for e in &el.edges {
            if let Some(j) = owner.insert(e, i) {
                bad = Some(format!("edge {e:?} appears in elements {j} and {i}"));
                break 'outer;
            }
        }
    }
    report.push("edge_disjoint", bad);

    let mut bad = None;
    for e in &p.leftover {
        if !is_valid_set(e, r, n) {
            bad = Some(format!("leftover entry {e:?} is not an r-set"));
        } else if let Some(i) = owner.get(e.as_slice()) {
            bad = Some(format!("leftover edge {e:?} is also in element {i}"));
        }
        if bad.is_some() {
            break;
        }
    }
    if bad.is_none() {
        if let Some(w) = p.leftover.windows(2).find(|w| w[0] >= w[1]) {
            bad = Some(format!("leftover list not strictly increasing at {:?}", w[1]));
        }
    }
    if bad.is_none() && owner.len() + p.leftover.len() != total {
        bad = Some(format!(
            "{} covered + {} leftover edges, expected {total} in total",
            owner.len(),
            p.leftover.len()
        ));
    }
    report.push("leftover_complement", bad);
    report
}

/// The edges of `K_n^r` not covered by any element, in lexicographic order,
/// recomputed from the elements.
pub fn leftover_edges(p: &Packing) -> Vec<Vec<usize>> {
    let ranker = RSetRanker::new(p.n, p.r);
    let mut covered = vec![false; ranker.len()];
    for e in p.elements.iter().flat_map(|el| &el.edges) {
        covered[ranker.rank(e)] = true;
    }
    rsets(p.n, p.r).filter(|e| !covered[ranker.rank(e)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::{build_random_packing, PackingElement, PackingParams};

    fn built() -> (Packing, PackingParams) {
        let params = PackingParams::direct(40, 3, 2, 16, 6, 4, 0.0).unwrap();
        (build_random_packing(&params, 11).unwrap().0, params)
    }

    #[test]
    fn built_packing_passes_everything() {
        let (p, params) = built();
        let report = validate_packing(&p, &params);
        assert!(report.pass, "{}", report.summary());
        assert_eq!(report.checks.len(), 7);
        assert_eq!(leftover_edges(&p), p.leftover);
    }

    #[test]
    fn duplicated_edge_breaks_disjointness() {
        let (mut p, params) = built();
        let (i, j, e) = (0..p.elements.len())
            .flat_map(|i| (0..p.elements.len()).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .find_map(|(i, j)| {
                let vj = &p.elements[j].vertices;
                p.elements[i]
                    .edges
                    .iter()
                    .find(|e| e.iter().all(|v| vj.binary_search(v).is_ok()))
                    .map(|e| (i, j, e.clone()))
            })
            .expect("two elements share a triple of vertices");
        let _ = i;
        let el = &mut p.elements[j];
        el.edges.pop();
        el.edges.push(e);
        el.edges.sort();
        let report = validate_packing(&p, &params);
        assert!(!report.passed("edge_disjoint"));
        assert!(report.passed("element_order"));
        assert!(report.passed("equal_edge_counts"));
    }

    #[test]
    fn removed_edge_breaks_equal_counts() {
        let (mut p, params) = built();
        let e = p.elements[2].edges.remove(0);
        p.leftover.push(e);
        p.leftover.sort();
        let report = validate_packing(&p, &params);
        assert!(!report.passed("equal_edge_counts"));
        assert!(report.passed("edge_disjoint"));
        assert!(report.passed("leftover_complement"));
    }

    #[test]
    fn degree_and_count_failures() {
        let mut p = Packing {
            n: 6,
            r: 3,
            q: 4,
            k: 1,
            z: 2,
            elements: vec![PackingElement {
                vertices: vec![0, 1, 2, 3],
                edges: vec![vec![0, 1, 2], vec![0, 1, 3]],
            }],
            leftover: Vec::new(),
        };
        p.leftover = leftover_edges(&p);
        let params = PackingParams::direct(6, 3, 1, 4, 1, 1, 1.0).unwrap();
        let report = validate_packing(&p, &params);
        // {2, 3} lies in no edge
        assert!(!report.passed("min_degree"));
        assert!(report.check("min_degree").unwrap().counterexample.as_ref().unwrap().contains("[2, 3]"));
        assert!(report.passed("half_coverage"));
        let params = PackingParams::direct(6, 3, 1, 4, 1, 1, 0.0).unwrap();
        assert!(validate_packing(&p, &params).pass);
        let params = PackingParams::direct(6, 3, 2, 4, 2, 1, 0.0).unwrap();
        let report = validate_packing(&p, &params);
        assert!(!report.passed("element_order"));
        p.k = 2;
        let report = validate_packing(&p, &params);
        assert!(!report.passed("element_count"));
        p.elements[0].edges = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        p.elements.push(PackingElement {
            vertices: vec![2, 3, 4, 5],
            edges: vec![vec![2, 4, 5], vec![3, 4, 5], vec![2, 3, 4], vec![2, 3, 5]],
        });
        p.z = 4;
        p.leftover = leftover_edges(&p);
        assert!(validate_packing(&p, &params).pass);
        // 8 of 20 edges covered; three elements of four would pass half
        p.elements.push(PackingElement {
            vertices: vec![0, 1, 4, 5],
            edges: vec![vec![0, 1, 4], vec![0, 1, 5], vec![0, 4, 5], vec![1, 4, 5]],
        });
        p.elements.push(p.elements[2].clone());
        p.leftover = leftover_edges(&p);
        let report = validate_packing(&p, &params);
        assert!(!report.passed("half_coverage"));
        assert!(!report.passed("edge_disjoint"));
    }
}
