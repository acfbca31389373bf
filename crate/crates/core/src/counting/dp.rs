use std::ops::AddAssign;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;

use super::{check_cycle_domain, CountError, CountMethod, CountResult};
use crate::Hypergraph;

/// `u128` counters hold `(n-1)!` up to here.
const MAX_DP_N: usize = 35;
/// `u64` counters hold `(n-1)!` up to here.
const MAX_U64_N: usize = 21;

#[derive(Clone, Debug)]
pub struct DpConfig {
    pub memory_budget_bytes: u64,
}

impl Default for DpConfig {
    fn default() -> Self {
        Self {
            memory_budget_bytes: 8 << 30,
        }
    }
}

pub fn exact_ham_count(g: &Hypergraph) -> Result<CountResult, CountError> {
    exact_ham_count_with(g, &DpConfig::default())
}

/// Subset DP. Vertex 0 sits at position 0 and the first `r - 1` positions
/// (the prefix) are enumerated in an outer loop; the inner table is indexed by
/// (set of used vertices other than 0, ordered last `r - 1` vertices). Every
/// cycle is reached once per direction, hence the final halving.
pub fn exact_ham_count_with(g: &Hypergraph, cfg: &DpConfig) -> Result<CountResult, CountError> {
    let (n, r) = (g.n(), g.r());
    check_cycle_domain(n, r)?;
    if n > MAX_DP_N {
        return Err(CountError::ScaleLimit(format!("subset DP supports n <= {MAX_DP_N}, got n = {n}")));
    }
    let word = if n <= MAX_U64_N { 8u128 } else { 16u128 };
    let frontiers = (n as u128).pow(r as u32 - 1);
    let states = frontiers << (n - 1);
    let bytes = states * word;
    if bytes > cfg.memory_budget_bytes as u128 || usize::try_from(states).is_err() {
        return Err(CountError::ScaleLimit(format!(
            "subset DP needs {states} states (~{bytes} bytes), budget is {} bytes",
            cfg.memory_budget_bytes
        )));
    }
    let workers = (cfg.memory_budget_bytes as u128 / bytes).clamp(1, rayon::current_num_threads() as u128) as usize;
    let count = if n <= MAX_U64_N {
        Dp::new(g).run::<u64>(workers)
    } else {
        Dp::new(g).run::<u128>(workers)
    };
    Ok(CountResult {
        count: count / 2u32,
        method: CountMethod::SubsetDp,
    })
}

struct Dp<'a> {
    g: &'a Hypergraph,
    n: usize,
    r: usize,
    frontiers: usize,
    // weight of the oldest frontier digit
    top: usize,
    // comp[f]: bit v-1 set iff frontier f plus vertex v is an edge
    comp: Vec<u64>,
}

trait Counter: Copy + Default + PartialEq + AddAssign + Into<BigUint> + Send + Sync {
    const ONE: Self;
}

impl Counter for u64 {
    const ONE: Self = 1;
}

impl Counter for u128 {
    const ONE: Self = 1;
}

impl<'a> Dp<'a> {
    fn new(g: &'a Hypergraph) -> Self {
        let (n, r) = (g.n(), g.r());
        let frontiers = n.pow(r as u32 - 1);
        let mut dp = Self {
            g,
            n,
            r,
            frontiers,
            top: n.pow(r as u32 - 2),
            comp: Vec::new(),
        };
        let mut digits = vec![0; r - 1];
        let mut buf = vec![0; r];
        dp.comp = (0..frontiers)
            .map(|f| {
                dp.decode(f, &mut digits);
                if !digits.iter().all_unique() {
                    return 0;
                }
                let mut bits = 0u64;
                for v in 1..n {
                    if digits.contains(&v) {
                        continue;
                    }
                    buf[..r - 1].copy_from_slice(&digits);
                    buf[r - 1] = v;
                    buf.sort_unstable();
                    if g.contains(&buf) {
                        bits |= 1 << (v - 1);
                    }
                }
                bits
            })
            .collect();
        dp
    }

    fn decode(&self, mut f: usize, out: &mut [usize]) {
        for d in out.iter_mut().rev() {
            *d = f % self.n;
            f /= self.n;
        }
    }

    fn run<T: Counter>(&self, workers: usize) -> BigUint {
        let prefixes: Vec<Vec<usize>> = (1..self.n).permutations(self.r - 2).collect();
        let chunk = prefixes.len().div_ceil(workers);
        let len = self.frontiers << (self.n - 1);
        prefixes
            .par_chunks(chunk)
            .map(|group| {
                let mut table = vec![T::default(); len];
                let mut sum = T::default();
                for p in group {
                    sum += self.run_prefix(p, &mut table);
                }
                sum.into()
            })
            .reduce(BigUint::default, |a, b| a + b)
    }

    /// Counts anchored sequences starting `0, prefix...`. Leaves `table` zeroed.
    fn run_prefix<T: Counter>(&self, prefix: &[usize], table: &mut [T]) -> T {
        let (n, width) = (self.n, self.frontiers);
        let full: u64 = (1u64 << (n - 1)) - 1;
        let pmask: u64 = prefix.iter().fold(0, |m, &v| m | 1 << (v - 1));
        let start = prefix.iter().fold(0, |f, &v| f * n + v);
        table[pmask as usize * width + start] = T::ONE;

        let rest = full & !pmask;
        let mut sub = 0u64;
        loop {
            let mask = pmask | sub;
            let base = mask as usize * width;
            if mask == full {
                return self.close(prefix, &mut table[base..base + width]);
            }
            for f in 0..width {
                let c = table[base + f];
                if c == T::default() {
                    continue;
                }
                table[base + f] = T::default();
                let shifted = (f % self.top) * n;
                let mut cand = self.comp[f] & !mask;
                while cand != 0 {
                    let b = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    let next = (mask | 1 << b) as usize * width + shifted + b + 1;
                    table[next] += c;
                }
            }
            sub = sub.wrapping_sub(rest) & rest;
        }
    }

    fn close<T: Counter>(&self, prefix: &[usize], row: &mut [T]) -> T {
        let r = self.r;
        let mut seq = vec![0; 2 * (r - 1)];
        seq[r - 1] = 0;
        seq[r..].copy_from_slice(prefix);
        let mut buf = vec![0; r];
        let mut total = T::default();
        for (f, slot) in row.iter_mut().enumerate() {
            let c = *slot;
            if c == T::default() {
                continue;
            }
            *slot = T::default();
            self.decode(f, &mut seq[..r - 1]);
            let ok = (0..r - 1).all(|i| {
                buf.copy_from_slice(&seq[i..i + r]);
                buf.sort_unstable();
                self.g.contains(&buf)
            });
            if ok {
                total += c;
            }
        }
        total
    }
}
