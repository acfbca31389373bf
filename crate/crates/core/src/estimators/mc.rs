use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::classify::{classify_order, Scratch};
use super::{EstimateError, MeanEstimate};
use crate::combinatorics::{binomial, ln_factorial};
use crate::counting::{exact_ham_count_with, ln_expectation_value, DpConfig};
use crate::packing::{FamilyIndex, FamilyKind, PartitionedFamily};
use crate::randmodels::{build_quasirandom_from_partition, DensitySpec};
use crate::rng::{chunks, substream, tag, Rng};
use crate::Hypergraph;

pub const MIN_SAMPLES: usize = 1000;
const CHUNK: u64 = 256;

/// Integer sums over a batch of uniform permutations; merging is exact, so
/// the totals do not depend on how batches are scheduled.
#[derive(Clone, Copy, Default, Debug)]
struct Tally {
    total: u64,
    bad: u64,
    f_sum: u64,
    f_sq: u64,
    g_good: u64,
    g_good_sq: u64,
    g_all: u64,
    g_all_sq: u64,
    f_excess: u64,
}

impl Tally {
    fn merge(mut self, o: Self) -> Self {
        self.total += o.total;
        self.bad += o.bad;
        self.f_sum += o.f_sum;
        self.f_sq += o.f_sq;
        self.g_good += o.g_good;
        self.g_good_sq += o.g_good_sq;
        self.g_all += o.g_all;
        self.g_all_sq += o.g_all_sq;
        self.f_excess += o.f_excess;
        self
    }

    fn good(&self) -> u64 {
        self.total - self.bad
    }
}

fn tally(f: &PartitionedFamily, index: &FamilyIndex, samples: usize, seed: u64) -> Result<Tally, EstimateError> {
    let n = f.n;
    let parts: Vec<_> = chunks(samples as u64, CHUNK).collect();
    let tallies: Vec<Result<Tally, EstimateError>> = parts
        .into_par_iter()
        .map(|(c, range)| {
            let mut rng = substream(seed, tag::ESTIMATE, c);
            let mut order: Vec<usize> = (0..n).collect();
            let mut scratch = Scratch::default();
            let mut t = Tally::default();
            for _ in range {
                order.shuffle(&mut rng);
                let cl = classify_order(&order, index, &mut scratch)?;
                let g = cl.g as u64;
                t.total += 1;
                t.g_all += g;
                t.g_all_sq += g * g;
                match cl.f {
                    Some(fv) => {
                        let fv = fv as u64;
                        t.f_sum += fv;
                        t.f_sq += fv * fv;
                        t.g_good += g;
                        t.g_good_sq += g * g;
                        if fv + g > n as u64 {
                            t.f_excess += 1;
                        }
                    }
                    None => t.bad += 1,
                }
            }
            Ok(t)
        })
        .collect();
    tallies.into_iter().try_fold(Tally::default(), |acc, t| Ok(acc.merge(t?)))
}

fn check_samples(samples: usize) -> Result<(), EstimateError> {
    if samples < MIN_SAMPLES {
        return Err(EstimateError::TooFewSamples {
            got: samples,
            min: MIN_SAMPLES,
        });
    }
    Ok(())
}

/// Fraction of uniform permutations that are bad.
pub fn mc_bad_fraction(f: &PartitionedFamily, samples: usize, seed: u64) -> Result<MeanEstimate, EstimateError> {
    check_samples(samples)?;
    let t = tally(f, &f.index(), samples, seed)?;
    Ok(MeanEstimate::from_sums(t.total, t.bad as f64, t.bad as f64))
}

/// Union bound on the bad fraction: the number of position-disjoint window
/// pairs of a cyclic permutation times the exact probability that a uniform
/// ordered pair of disjoint `r`-sets lands in distinct members of one group.
pub fn union_bound_bad_fraction(f: &PartitionedFamily) -> f64 {
    let (n, r) = (f.n as f64, f.r);
    let mut colliding = 0f64;
    for g in &f.element_groups {
        let sizes: Vec<f64> = g.iter().map(|&i| f.elements[i].edges.len() as f64).collect();
        let sum: f64 = sizes.iter().sum();
        colliding += sum * sum - sizes.iter().map(|s| s * s).sum::<f64>();
    }
    for g in &f.leftover_groups {
        colliding += (g.len() * g.len().saturating_sub(1)) as f64;
    }
    let pairs_of_sets = binomial(f.n as u64, r as u64).unwrap_or(0) as f64
        * binomial((f.n - r) as u64, r as u64).unwrap_or(0) as f64;
    let window_pairs = n * (n - 2.0 * r as f64 + 1.0) / 2.0;
    (window_pairs * colliding / pairs_of_sets).min(1.0)
}

/// `n (q - 2) / (n - 3)` for a Steiner family `S(3, q+1, n)`.
pub fn gbar_star_exact(f: &PartitionedFamily) -> Result<f64, EstimateError> {
    match f.kind {
        FamilyKind::Steiner { q, .. } => {
            let n = f.n as f64;
            Ok(n * (q as f64 - 2.0) / (n - 3.0))
        }
        ref other => Err(EstimateError::FamilyKindMismatch(format!(
            "the closed form needs a Steiner family, got {other:?}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GStarEstimate {
    pub estimate: MeanEstimate,
    pub exact: Option<f64>,
}

/// Mean of `g` over uniform permutations; the exact value too for Steiner
/// families.
pub fn mc_gbar_star(f: &PartitionedFamily, samples: usize, seed: u64) -> Result<GStarEstimate, EstimateError> {
    check_samples(samples)?;
    let t = tally(f, &f.index(), samples, seed)?;
    Ok(GStarEstimate {
        estimate: MeanEstimate::from_sums(t.total, t.g_all as f64, t.g_all_sq as f64),
        exact: gbar_star_exact(f).ok(),
    })
}

fn family_label(f: &PartitionedFamily) -> String {
    match f.kind {
        FamilyKind::Steiner { q, s } => format!("steiner(q={q},s={s},k={})", f.k),
        FamilyKind::Packing => format!("packing(n={},r={},k={})", f.n, f.r, f.k),
        FamilyKind::Singletons => format!("singletons(n={},r={})", f.n, f.r),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub family: String,
    pub n: usize,
    pub r: usize,
    pub p: DensitySpec,
    pub samples: usize,
    pub bad_fraction: MeanEstimate,
    /// Mean `f` over good permutations.
    pub fbar: MeanEstimate,
    /// Mean `g` over good permutations.
    pub gbar: MeanEstimate,
    /// Mean `g` over all permutations.
    pub gbar_star: MeanEstimate,
    pub gbar_star_exact: Option<f64>,
    /// Good samples with `f > n - g`; always 0 for a valid family.
    pub f_bound_violations: u64,
    pub union_bound_bad: f64,
    /// `log2((good fraction) n! / (2n) p^fbar)`.
    pub log2_bound: f64,
    /// 3-sigma half-width of `log2_bound` (delta method).
    pub log2_bound_ci3: f64,
    /// `2^log2_bound` when representable.
    pub lower_bound_estimate: Option<f64>,
    pub log2_e: f64,
    pub log2_ratio: f64,
    pub seed: u64,
}

/// Estimates `fbar` over good permutations and the averaged lower bound
/// `|good| / (2n) * p^fbar` on the expected cycle count of the builder's
/// output.
pub fn mc_fbar_and_bound(
    f: &PartitionedFamily,
    spec: DensitySpec,
    samples: usize,
    seed: u64,
) -> Result<EstimateReport, EstimateError> {
    check_samples(samples)?;
    let t = tally(f, &f.index(), samples, seed)?;
    if t.good() == 0 {
        return Err(EstimateError::InsufficientGoodSamples(samples));
    }
    let n = f.n;
    let bad = MeanEstimate::from_sums(t.total, t.bad as f64, t.bad as f64);
    let fbar = MeanEstimate::from_sums(t.good(), t.f_sum as f64, t.f_sq as f64);
    let gbar = MeanEstimate::from_sums(t.good(), t.g_good as f64, t.g_good_sq as f64);
    let gbar_star = MeanEstimate::from_sums(t.total, t.g_all as f64, t.g_all_sq as f64);
    let ln2 = std::f64::consts::LN_2;
    let p = spec.value();
    let good_frac = t.good() as f64 / t.total as f64;
    let log2_bound = good_frac.log2() + (ln_factorial(n as u64) / ln2 - ((2 * n) as f64).log2()) + fbar.mean * p.log2();
    let sd_ln_good = bad.ci3 / 3.0 / good_frac;
    let sd_ln_pf = fbar.ci3 / 3.0 * p.ln().abs();
    let log2_bound_ci3 = 3.0 * (sd_ln_good * sd_ln_good + sd_ln_pf * sd_ln_pf).sqrt() / ln2;
    let log2_e = ln_expectation_value(n as u64, p) / ln2;
    Ok(EstimateReport {
        family: family_label(f),
        n,
        r: f.r,
        p: spec,
        samples,
        bad_fraction: bad,
        fbar,
        gbar,
        gbar_star,
        gbar_star_exact: gbar_star_exact(f).ok(),
        f_bound_violations: t.f_excess,
        union_bound_bad: union_bound_bad_fraction(f),
        log2_bound,
        log2_bound_ci3,
        lower_bound_estimate: (log2_bound < 1000.0).then(|| log2_bound.exp2()),
        log2_e,
        log2_ratio: log2_bound - log2_e,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub mean_h: f64,
    pub e: f64,
    pub ratio: f64,
    pub log2_ratio: f64,
}

/// `mean_h / E(n, p)`, computed in log space.
pub fn ratio_report(mean_h: f64, n: usize, p: f64) -> RatioReport {
    let ln_e = ln_expectation_value(n as u64, p);
    let log2_ratio = (mean_h.ln() - ln_e) / std::f64::consts::LN_2;
    RatioReport {
        mean_h,
        e: ln_e.exp(),
        ratio: log2_ratio.exp2(),
        log2_ratio,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HEstimate {
    /// Exact count per build, in build order.
    pub values: Vec<BigUint>,
    pub mean: MeanEstimate,
    pub max: BigUint,
    pub mean_ratio: RatioReport,
    pub max_ratio: RatioReport,
}

/// Builds `builds` graphs (build `b` draws from stream `(seed, stream_tag, b)`)
/// and counts each one's cycles exactly.
pub fn mc_expected_h(
    mut builder: impl FnMut(&mut Rng) -> Result<Hypergraph, EstimateError>,
    p: f64,
    builds: usize,
    seed: u64,
    stream_tag: u64,
    dp: &DpConfig,
) -> Result<HEstimate, EstimateError> {
    let mut values = Vec::with_capacity(builds);
    let mut n = 0;
    for b in 0..builds as u64 {
        let mut rng = substream(seed, stream_tag, b);
        let g = builder(&mut rng)?;
        n = g.n();
        values.push(exact_ham_count_with(&g, dp)?.count);
    }
    let as_f64 = |v: &BigUint| v.to_f64().unwrap_or(f64::INFINITY);
    let sum: f64 = values.iter().map(as_f64).sum();
    let sumsq: f64 = values.iter().map(|v| as_f64(v).powi(2)).sum();
    let mean = MeanEstimate::from_sums(values.len() as u64, sum, sumsq);
    let max = values.iter().max().cloned().unwrap_or_default();
    Ok(HEstimate {
        mean_ratio: ratio_report(mean.mean, n, p),
        max_ratio: ratio_report(as_f64(&max), n, p),
        values,
        mean,
        max,
    })
}

/// [`mc_expected_h`] with the partition-driven builder.
pub fn mc_expected_h_family(
    f: &PartitionedFamily,
    spec: DensitySpec,
    builds: usize,
    seed: u64,
    dp: &DpConfig,
) -> Result<HEstimate, EstimateError> {
    mc_expected_h(
        |rng| Ok(build_quasirandom_from_partition(f, spec, rng)?),
        spec.value(),
        builds,
        seed,
        tag::BUILDER,
        dp,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::expectation_value;
    use crate::geometry::build_spherical_steiner;
    use crate::packing::PartitionConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(q: u32, s: u32, k: usize) -> PartitionedFamily {
        let sys = build_spherical_steiner(q, s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        PartitionedFamily::from_steiner(&sys, k, &PartitionConfig::default(), &mut rng).unwrap()
    }

    #[test]
    fn singleton_family_recovers_expectation() {
        let f = PartitionedFamily::singletons(9, 3).unwrap();
        let bad = mc_bad_fraction(&f, 2000, 1).unwrap();
        assert_eq!(bad.mean, 0.0);
        let p = DensitySpec::new(1, 2).unwrap();
        let rep = mc_fbar_and_bound(&f, p, 2000, 1).unwrap();
        assert_eq!(rep.fbar.mean, 9.0);
        assert!((rep.log2_bound - rep.log2_e).abs() < 1e-9);
        assert!((rep.lower_bound_estimate.unwrap() - expectation_value(9, 0.5)).abs() < 1e-6);
    }

    #[test]
    fn gbar_star_formula() {
        let f = family(3, 2, 1);
        let est = mc_gbar_star(&f, 20_000, 3).unwrap();
        assert!((est.exact.unwrap() - 10.0 / 7.0).abs() < 1e-12);
        assert!(est.estimate.contains(10.0 / 7.0), "{:?}", est.estimate);
        let f = family(2, 4, 2);
        let est = mc_gbar_star(&f, 5000, 3).unwrap();
        assert_eq!(est.exact, Some(0.0));
        assert_eq!(est.estimate.mean, 0.0);
        let s = PartitionedFamily::singletons(8, 3).unwrap();
        assert!(matches!(gbar_star_exact(&s), Err(EstimateError::FamilyKindMismatch(_))));
    }

    #[test]
    fn steiner17_bound_and_union_bound() {
        let f = family(2, 4, 2);
        let p = DensitySpec::new(1, 2).unwrap();
        let rep = mc_fbar_and_bound(&f, p, 20_000, 4).unwrap();
        assert_eq!(rep.f_bound_violations, 0);
        // blocks are single triples, so f = n for every good permutation
        assert_eq!(rep.fbar.mean, 17.0);
        assert!(rep.fbar.mean <= 17.0 - rep.gbar.mean);
        // (q+1)q(q-1) / ((n-3)(n-4)(n-5)) = 1/364 per disjoint window pair
        assert!((union_bound_bad_fraction(&f) - 17.0 * 12.0 / 2.0 / 364.0).abs() < 1e-12);
        assert!(rep.bad_fraction.mean <= union_bound_bad_fraction(&f));
        let e = expectation_value(17, 0.5);
        let b = rep.lower_bound_estimate.unwrap();
        assert!(b >= e * (1.0 - rep.bad_fraction.mean - rep.bad_fraction.ci3) * (1.0 - 1e-9));
    }

    #[test]
    fn bad_fraction_falls_with_larger_designs() {
        let small = mc_bad_fraction(&family(2, 2, 1), 2000, 5).unwrap();
        assert_eq!(small.mean, 0.0);
        let a = mc_bad_fraction(&family(2, 4, 2), 20_000, 5).unwrap();
        let b = mc_bad_fraction(&family(3, 4, 2), 4_000, 5).unwrap();
        assert!(a.mean - a.ci3 > b.mean + b.ci3, "{a:?} vs {b:?}");
    }

    #[test]
    fn worker_count_does_not_matter() {
        let f = family(3, 2, 2);
        let p = DensitySpec::new(1, 2).unwrap();
        let a = mc_fbar_and_bound(&f, p, 3000, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| mc_fbar_and_bound(&f, p, 3000, 9).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_samples() {
        let f = family(2, 2, 1);
        assert!(matches!(mc_bad_fraction(&f, 10, 0), Err(EstimateError::TooFewSamples { .. })));
    }

    #[test]
    fn singleton_builds_match_gnp_mean() {
        // independent coins on every edge: E[H] = E(n, p)
        let f = PartitionedFamily::singletons(8, 3).unwrap();
        let p = DensitySpec::new(3, 4).unwrap();
        let est = mc_expected_h_family(&f, p, 400, 2, &DpConfig::default()).unwrap();
        let e = expectation_value(8, 0.75);
        assert!((est.mean.mean - e).abs() <= est.mean.ci3, "{:?} vs {e}", est.mean);
        let full = mc_expected_h(|_| Ok(Hypergraph::complete(7, 3).unwrap()), 1.0, 2, 0, tag::GNP, &DpConfig::default()).unwrap();
        assert!((full.mean_ratio.ratio - 1.0).abs() < 1e-12);
    }
}
