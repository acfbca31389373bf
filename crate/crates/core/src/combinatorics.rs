//! Small exact-arithmetic helpers shared across modules.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` as `u128`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, k)` as `usize`; panics if it does not fit. Only for desk-scale sizes.
pub fn binomial_usize(n: usize, k: usize) -> usize {
    binomial(n as u64, k as u64)
        .and_then(|v| usize::try_from(v).ok())
        .unwrap_or_else(|| panic!("C({n}, {k}) overflows usize"))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `k (k-1) ... (k-t+1)`.
pub fn falling_factorial(k: u64, t: u64) -> BigUint {
    if t > k {
        return BigUint::from(0u32);
    }
    (0..t).fold(BigUint::one(), |acc, i| acc * (k - i))
}

pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `log2` of a big unsigned integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        let v: f64 = x.to_string().parse().unwrap_or(f64::INFINITY);
        if v.is_finite() {
            return v.log2();
        }
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).try_into().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

/// Ranks `r`-subsets of `0..n` in colexicographic order, giving a dense index
/// in `0..C(n, r)` for every edge of `K_n^r`.
#[derive(Clone, Debug)]
pub struct RSetRanker {
    n: usize,
    r: usize,
    // table[i][v] = C(v, i + 1)
    table: Vec<Vec<usize>>,
    total: usize,
}

impl RSetRanker {
    pub fn new(n: usize, r: usize) -> Self {
        assert!(r <= 16, "ranker supports r <= 16");
        let table = (0..r)
            .map(|i| (0..=n).map(|v| binomial_usize(v, i + 1)).collect())
            .collect();
        Self {
            n,
            r,
            table,
            total: binomial_usize(n, r),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of `r`-subsets, `C(n, r)`.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Rank of a strictly increasing `r`-tuple.
    pub fn rank(&self, sorted: &[usize]) -> usize {
        debug_assert_eq!(sorted.len(), self.r);
        sorted
            .iter()
            .enumerate()
            .map(|(i, &v)| self.table[i][v])
            .sum()
    }

    /// Rank of an arbitrary-order tuple of distinct vertices.
    pub fn rank_unsorted(&self, vertices: &[usize]) -> usize {
        let mut buf = [0usize; 16];
        let buf = &mut buf[..vertices.len()];
        buf.copy_from_slice(vertices);
        buf.sort_unstable();
        self.rank(buf)
    }

    pub fn unrank(&self, mut rank: usize) -> Vec<usize> {
        let mut out = vec![0; self.r];
        let mut hi = self.n;
        for i in (0..self.r).rev() {
            // largest v < hi with C(v, i+1) <= rank
            let mut v = hi - 1;
            while self.table[i][v] > rank {
                v -= 1;
            }
            out[i] = v;
            rank -= self.table[i][v];
            hi = v;
        }
        out
    }
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn rsets(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(17, 3), Some(680));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(60, 3), Some(34220));
    }

    #[test]
    fn ranker_is_a_bijection() {
        let ranker = RSetRanker::new(9, 3);
        let mut seen = vec![false; ranker.len()];
        for set in rsets(9, 3) {
            let rk = ranker.rank(&set);
            assert!(!seen[rk]);
            seen[rk] = true;
            assert_eq!(ranker.unrank(rk), set);
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn log2_of_big_values() {
        assert!((log2_big(&BigUint::from(1024u32)) - 10.0).abs() < 1e-12);
        let big = factorial(400);
        let exact = ln_factorial(400) / std::f64::consts::LN_2;
        assert!((log2_big(&big) - exact).abs() < 1e-6);
    }
}
