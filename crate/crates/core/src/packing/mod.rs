//! Randomized edge-disjoint packings of `K_n^r`, the disjoint-group
//! partitioner, and partitioned families.

mod build;
mod family;
mod io;
mod partition;
mod validate;

use crate::combinatorics::binomial;

pub use build::{build_random_packing, build_random_packing_with, BuildConfig, BuildStats};
pub use family::{FamilyElement, FamilyIndex, FamilyKind, Owner, PartitionedFamily};
pub use io::{read_packing, write_packing};
pub use partition::{partition_into_disjoint_groups, PartitionConfig};
pub use validate::{leftover_edges, validate_packing};

/// Largest `C(n, r)` the packing code enumerates.
pub const MAX_PACKING_EDGES: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PackingError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("no valid packing after {} attempts ({})", .0.attempts, .0.summary())]
    RetryBudgetExhausted(Box<BuildStats>),
    #[error("could not split {items} items into groups of {k} after {swaps} swaps ({unplaced} left unplaced)")]
    PartitionFailed {
        items: usize,
        k: usize,
        swaps: usize,
        unplaced: usize,
    },
    #[error("{count} items cannot be split into groups of {k} (residue {residue})")]
    DivisibilityViolation { count: usize, k: usize, residue: usize },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("scale limit: {0}")]
    ScaleLimit(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PackingMode {
    /// `q`, `K`, `M` and the degree thresholds derived from the exponents.
    Faithful { beta: f64, delta: f64 },
    /// Everything explicit; a single degree threshold `tau` for every `|X|`.
    Direct { q: usize, count: usize, m: usize, tau: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackingParams {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub mode: PackingMode,
    q: usize,
    count: usize,
    m: usize,
}

/// `ceil(x)`, treating values within `1e-9` of an integer as that integer so
/// that e.g. `64^(1/2)` gives 8 and not 9.
fn snapped_ceil(x: f64) -> f64 {
    let near = x.round();
    if (x - near).abs() <= 1e-9 * near.abs().max(1.0) {
        near
    } else {
        x.ceil()
    }
}

/// The exponent the construction pairs with `delta`: `1/2 - delta` for
/// `r >= 4`, `1/3 - delta` for `r = 3`.
pub fn default_beta(r: usize, delta: f64) -> f64 {
    if r >= 4 {
        0.5 - delta
    } else {
        1.0 / 3.0 - delta
    }
}

impl PackingParams {
    pub fn faithful(n: usize, r: usize, k: usize, beta: f64, delta: f64) -> Result<Self, PackingError> {
        Self::check_common(n, r, k)?;
        if !(0.0 < delta && delta < beta && beta < 1.0) {
            return Err(PackingError::InvalidParams(format!(
                "need 0 < delta < beta < 1, got beta = {beta}, delta = {delta}"
            )));
        }
        let nf = n as f64;
        let q = snapped_ceil(nf.powf(beta)) as usize;
        let base = snapped_ceil(nf.powf(r as f64 * (1.0 - beta))) as usize;
        let count = base.div_ceil(k) * k;
        let m = (nf.powf(delta) / 4.0 + 1e-9).floor() as usize;
        if m == 0 {
            return Err(PackingError::InfeasibleParams(format!(
                "M = floor(n^delta / 4) = 0 for n = {n}, delta = {delta}; use direct mode"
            )));
        }
        let p = Self {
            n,
            r,
            k,
            mode: PackingMode::Faithful { beta, delta },
            q,
            count,
            m,
        };
        p.check_q()?;
        Ok(p)
    }

    pub fn direct(n: usize, r: usize, k: usize, q: usize, count: usize, m: usize, tau: f64) -> Result<Self, PackingError> {
        Self::check_common(n, r, k)?;
        if m == 0 {
            return Err(PackingError::InvalidParams("M must be at least 1".into()));
        }
        if count == 0 || count % k != 0 {
            return Err(PackingError::InvalidParams(format!(
                "element count {count} must be a positive multiple of k = {k}"
            )));
        }
        if !(tau >= 0.0) {
            return Err(PackingError::InvalidParams(format!("degree threshold must be >= 0, got {tau}")));
        }
        let p = Self {
            n,
            r,
            k,
            mode: PackingMode::Direct { q, count, m, tau },
            q,
            count,
            m,
        };
        p.check_q()?;
        Ok(p)
    }

    fn check_common(n: usize, r: usize, k: usize) -> Result<(), PackingError> {
        if r < 2 || r > 16 {
            return Err(PackingError::InvalidParams(format!("uniformity r = {r} must be in 2..=16")));
        }
        if k == 0 {
            return Err(PackingError::InvalidParams("group size k must be at least 1".into()));
        }
        match binomial(n as u64, r as u64) {
            Some(c) if c <= MAX_PACKING_EDGES => Ok(()),
            _ => Err(PackingError::ScaleLimit(format!(
                "C({n}, {r}) exceeds {MAX_PACKING_EDGES} edges"
            ))),
        }
    }

    fn check_q(&self) -> Result<(), PackingError> {
        if self.q < self.r || self.q > self.n {
            return Err(PackingError::InvalidParams(format!(
                "element order q = {} must satisfy r <= q <= n (r = {}, n = {})",
                self.q, self.r, self.n
            )));
        }
        if self.q > 128 {
            return Err(PackingError::ScaleLimit(format!("element order q = {} exceeds 128", self.q)));
        }
        Ok(())
    }

    /// Vertices per element.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of elements `K`.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Reassignment range `M`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Minimum degree required of an `s`-subset of an element.
    pub fn threshold(&self, s: usize) -> f64 {
        match self.mode {
            PackingMode::Direct { tau, .. } => tau,
            PackingMode::Faithful { delta, .. } => {
                let c = binomial((self.q - s) as u64, (self.r - s) as u64).unwrap_or(u128::MAX) as f64;
                (self.n as f64).powf(-delta) * c
            }
        }
    }

    /// Lower bound on the number of elements.
    pub fn min_count(&self) -> f64 {
        match self.mode {
            PackingMode::Direct { count, .. } => count as f64,
            PackingMode::Faithful { beta, .. } => (self.n as f64).powf(self.r as f64 * (1.0 - beta)),
        }
    }
}

/// An edge-disjoint family of `r`-graphs on `q`-vertex subsets, all with `z`
/// edges, plus the edges of `K_n^r` they leave uncovered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub n: usize,
    pub r: usize,
    pub q: usize,
    pub k: usize,
    pub z: usize,
    pub elements: Vec<PackingElement>,
    /// Uncovered edges in lexicographic order.
    pub leftover: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingElement {
    /// Sorted.
    pub vertices: Vec<usize>,
    /// Sorted tuples in lexicographic order.
    pub edges: Vec<Vec<usize>>,
}

impl Packing {
    pub fn covered_edges(&self) -> usize {
        self.elements.iter().map(|e| e.edges.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faithful_arithmetic() {
        // n = 4096, r = 3, beta = 1/4: q = 8, n^(9/4) = 2^27, M = floor(4096^0.2 / 4) = 1
        let p = PackingParams::faithful(4096, 3, 3, 0.25, 0.2).unwrap_err();
        assert!(matches!(p, PackingError::ScaleLimit(_)));
        let p = PackingParams::faithful(64, 3, 5, 0.5, 0.4).unwrap();
        // 64^0.5 = 8; 64^1.5 = 512 -> 515; 64^0.4 / 4 = 5.278 / 4 -> 1
        assert_eq!((p.q(), p.count(), p.m()), (8, 515, 1));
        assert!((p.min_count() - 512.0).abs() < 1e-9);
        // 64^-0.4 * C(7, 2) = 21 / 5.278
        assert!((p.threshold(1) - 21.0 / 64f64.powf(0.4)).abs() < 1e-12);
        assert!((p.threshold(2) - 6.0 / 64f64.powf(0.4)).abs() < 1e-12);
        let p = PackingParams::faithful(100, 3, 2, 0.3, 0.1).unwrap_err();
        assert!(matches!(p, PackingError::InfeasibleParams(_)));
        assert!((default_beta(3, 0.1) - (1.0 / 3.0 - 0.1)).abs() < 1e-15);
        assert!((default_beta(5, 0.1) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn direct_validation() {
        assert!(PackingParams::direct(60, 3, 3, 8, 210, 3, 2.0).is_ok());
        assert!(PackingParams::direct(60, 3, 4, 8, 210, 3, 2.0).is_err());
        assert!(PackingParams::direct(60, 3, 3, 8, 210, 0, 2.0).is_err());
        assert!(PackingParams::direct(60, 3, 3, 61, 210, 3, 2.0).is_err());
        assert!(PackingParams::direct(60, 3, 3, 2, 210, 3, 2.0).is_err());
    }
}
