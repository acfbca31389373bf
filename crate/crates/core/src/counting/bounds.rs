use std::f64::consts::PI;

use super::BinaryMatrix;
use crate::combinatorics::ln_factorial;

/// `E(n, p) = p^n (n-1)! / 2`, the expected number of Hamiltonian cycles.
pub fn expectation_value(n: u64, p: f64) -> f64 {
    let fact: f64 = (2..n).map(|i| i as f64).product();
    p.powi(n as i32) * fact / 2.0
}

pub fn ln_expectation_value(n: u64, p: f64) -> f64 {
    n as f64 * p.ln() + ln_factorial(n - 1) - 2f64.ln()
}

/// `prod_i (r_i!)^(1/r_i)` over row sums; empty rows contribute 1.
pub fn bregman_bound(m: &BinaryMatrix) -> f64 {
    ln_bregman_bound(m).exp()
}

pub fn ln_bregman_bound(m: &BinaryMatrix) -> f64 {
    m.row_sums()
        .into_iter()
        .filter(|&r| r > 0)
        .map(|r| ln_factorial(r as u64) / r as f64)
        .sum()
}

/// `(1/e) (sqrt(2 pi))^(1/p - 1) p^(1/(2p)) n^(1/2 + 1/(2p)) E(n, p)`,
/// without the `1 + o(1)` factor. Only meaningful asymptotically.
pub fn alon_upper_bound_h2(n: u64, p: f64) -> f64 {
    ln_alon_upper_bound_h2(n, p).exp()
}

pub fn ln_alon_upper_bound_h2(n: u64, p: f64) -> f64 {
    -1.0 + (1.0 / p - 1.0) * (2.0 * PI).sqrt().ln() + p.ln() / (2.0 * p)
        + (0.5 + 0.5 / p) * (n as f64).ln()
        + ln_expectation_value(n, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation_value(5, 1.0), 12.0);
        assert!((expectation_value(8, 0.75) - 252.2845458984375).abs() < 1e-9);
        let direct = expectation_value(20, 0.3);
        assert!(rel(ln_expectation_value(20, 0.3).exp(), direct) < 1e-12);
    }

    #[test]
    fn bregman_is_tight_on_blocks() {
        assert!(rel(bregman_bound(&BinaryMatrix::ones(4)), 24.0) < 1e-12);
        assert!(rel(bregman_bound(&BinaryMatrix::identity(4)), 1.0) < 1e-12);
    }

    #[test]
    fn alon_bound_shape() {
        let direct = (1.0 / E) * (2.0 * PI).sqrt() * 0.5 * 100f64.powf(1.5) * expectation_value(100, 0.5);
        assert!(rel(alon_upper_bound_h2(100, 0.5), direct) < 1e-10);
        let mut last = f64::NEG_INFINITY;
        for n in 10..=1000 {
            let v = ln_alon_upper_bound_h2(n, 0.3);
            assert!(v > last);
            last = v;
        }
        for p in [0.2, 0.5, 0.8] {
            let slope = |n: u64| ln_alon_upper_bound_h2(n, p) - ln_expectation_value(n, p);
            let s = (slope(1_000_000) - slope(1000)) / (1e6f64.ln() - 1e3f64.ln());
            assert!((s - (0.5 + 0.5 / p)).abs() < 1e-9);
        }
    }
}
