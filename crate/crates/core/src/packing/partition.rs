use rand::seq::SliceRandom;
use rand::Rng;

use super::PackingError;

#[derive(Clone, Debug)]
pub struct PartitionConfig {
    /// Local-search moves allowed after the greedy pass.
    pub swap_budget: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self { swap_budget: 10_000 }
    }
}

struct Groups<'a> {
    items: &'a [Vec<usize>],
    k: usize,
    words: usize,
    occupied: Vec<Vec<u64>>,
    members: Vec<Vec<usize>>,
}

impl<'a> Groups<'a> {
    fn new(items: &'a [Vec<usize>], n: usize, k: usize) -> Self {
        let count = items.len() / k;
        let words = n.div_ceil(64);
        Self {
            items,
            k,
            words,
            occupied: vec![vec![0; words]; count],
            members: vec![Vec::with_capacity(k); count],
        }
    }

    fn hits(&self, g: usize, x: usize) -> bool {
        self.items[x].iter().any(|&v| self.occupied[g][v / 64] >> (v % 64) & 1 == 1)
    }

    fn conflicts(&self, g: usize, x: usize) -> Vec<usize> {
        let set = &self.items[x];
        self.members[g]
            .iter()
            .copied()
            .filter(|&y| self.items[y].iter().any(|v| set.contains(v)))
            .collect()
    }

    fn add(&mut self, g: usize, x: usize) {
        for &v in &self.items[x] {
            self.occupied[g][v / 64] |= 1 << (v % 64);
        }
        self.members[g].push(x);
    }

    fn remove(&mut self, g: usize, x: usize) {
        let m = &mut self.members[g];
        m.retain(|&y| y != x);
        self.occupied[g] = vec![0; self.words];
        for y in self.members[g].clone() {
            for &v in &self.items[y] {
                self.occupied[g][v / 64] |= 1 << (v % 64);
            }
        }
    }

    fn open(&self, g: usize) -> bool {
        self.members[g].len() < self.k
    }

    /// An open group other than `skip` that `x` fits into.
    fn find_open(&self, x: usize, skip: Option<usize>) -> Option<usize> {
        (0..self.members.len()).find(|&g| Some(g) != skip && self.open(g) && !self.hits(g, x))
    }
}

/// Splits `items` (vertex sets over `0..n`) into `items.len() / k` groups of
/// `k` pairwise vertex-disjoint members. Returns groups of item indices.
///
/// Greedy first fit in order of decreasing conflict degree (vertex
/// incidences counted with multiplicity), then augmenting swaps for whatever
/// the greedy pass could not place.
pub fn partition_into_disjoint_groups(
    items: &[Vec<usize>],
    n: usize,
    k: usize,
    cfg: &PartitionConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<usize>>, PackingError> {
    if k == 0 {
        return Err(PackingError::InvalidParams("group size k must be at least 1".into()));
    }
    if items.len() % k != 0 {
        return Err(PackingError::DivisibilityViolation {
            count: items.len(),
            k,
            residue: items.len() % k,
        });
    }
    if let Some(v) = items.iter().flatten().find(|&&v| v >= n) {
        return Err(PackingError::InvalidParams(format!("vertex {v} out of range 0..{n}")));
    }
    if let Some(i) = items.iter().position(|s| (1..s.len()).any(|a| s[..a].contains(&s[a]))) {
        return Err(PackingError::InvalidParams(format!("item {i} repeats a vertex")));
    }
    if k == 1 {
        return Ok((0..items.len()).map(|i| vec![i]).collect());
    }

    let mut incidence = vec![0usize; n];
    for &v in items.iter().flatten() {
        incidence[v] += 1;
    }
    let degree = |x: usize| items[x].iter().map(|&v| incidence[v] - 1).sum::<usize>();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(degree(x)));

    let mut groups = Groups::new(items, n, k);
    let total = groups.members.len();
    let mut opened = 0;
    // groups currently below k, in opening order
    let mut open: Vec<usize> = Vec::new();
    let mut pending = Vec::new();
    for &x in &order {
        if let Some(pos) = open.iter().position(|&g| !groups.hits(g, x)) {
            let g = open[pos];
            groups.add(g, x);
            if !groups.open(g) {
                open.remove(pos);
            }
        } else if opened < total {
            groups.add(opened, x);
            if groups.open(opened) {
                open.push(opened);
            }
            opened += 1;
        } else {
            pending.push(x);
        }
    }

    let mut swaps = 0;
    let mut ids: Vec<usize> = (0..total).collect();
    while let Some(mut x) = pending.pop() {
        loop {
            if let Some(g) = groups.find_open(x, None) {
                groups.add(g, x);
                break;
            }
            if swaps >= cfg.swap_budget {
                return Err(PackingError::PartitionFailed {
                    items: items.len(),
                    k,
                    swaps,
                    unplaced: pending.len() + 1,
                });
            }
            swaps += 1;
            ids.shuffle(rng);
            // x displaces a single blocker y that fits elsewhere
            let augment = ids.iter().find_map(|&g| match groups.conflicts(g, x).as_slice() {
                [y] => groups.find_open(*y, Some(g)).map(|h| (g, *y, h)),
                _ => None,
            });
            if let Some((g, y, h)) = augment {
                groups.remove(g, y);
                groups.add(g, x);
                groups.add(h, y);
                break;
            }
            // otherwise kick a random single blocker out and carry on with it
            let kick = ids
                .iter()
                .find_map(|&g| match groups.conflicts(g, x).as_slice() {
                    [y] => Some((g, *y)),
                    _ => None,
                });
            match kick {
                Some((g, y)) => {
                    groups.remove(g, y);
                    groups.add(g, x);
                    x = y;
                }
                None => {
                    // every group has two or more blockers: swap with a random group's member
                    let g = ids[0];
                    let y = groups.members[g][rng.gen_range(0..groups.members[g].len())];
                    groups.remove(g, y);
                    if groups.hits(g, x) {
                        groups.add(g, y);
                    } else {
                        groups.add(g, x);
                        x = y;
                    }
                }
            }
        }
    }
    Ok(groups.members)
}
