//! Named experiments. Each returns a JSON report with an overall `pass` and
//! one CSV table; all randomness comes from `(seed, tag, index)` streams,
//! so a fixed seed gives the same bytes for any worker count. (Exact counts
//! and Monte Carlo sums are order independent; only timing is not recorded.)

use clap::ValueEnum;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use hamforge_core::constructions::{
    count_admissible_words, count_placements_crown, count_placements_crown_brute_force, crown_graph,
    crown_placement_lower_bound, enumerate_admissible, multipartite_rgraph, sample_good_cycles,
};
use hamforge_core::counting::{exact_ham_count_with, DpConfig};
use hamforge_core::estimators::{mc_expected_h, mc_fbar_and_bound, EstimateReport, MeanEstimate, RatioReport};
use hamforge_core::geometry::{build_spherical_steiner, verify_steiner};
use hamforge_core::packing::{
    build_random_packing, build_random_packing_with, BuildConfig, BuildStats, Packing, PackingError, PackingParams,
    PartitionConfig, PartitionedFamily,
};
use hamforge_core::randmodels::{build_quasirandom_from_partition, sample_exact_density_subgraph, sample_gnm, DensitySpec};
use hamforge_core::report::ValidationReport;
use hamforge_core::rng::{stream, substream, tag};

use crate::{csv_rows, dom, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Crown,
    TuranSubsample,
    Steiner17Half,
    PackingDirect,
    MultipartiteWords,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Crown,
        Preset::TuranSubsample,
        Preset::Steiner17Half,
        Preset::PackingDirect,
        Preset::MultipartiteWords,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Crown => "crown",
            Preset::TuranSubsample => "turan-subsample",
            Preset::Steiner17Half => "steiner17-half",
            Preset::PackingDirect => "packing-direct",
            Preset::MultipartiteWords => "multipartite-words",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PresetOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    pub builds: Option<usize>,
    pub runs: Option<usize>,
    pub dp: DpConfig,
}

impl PresetOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            samples: None,
            builds: None,
            runs: None,
            dp: DpConfig::default(),
        }
    }
}

pub struct PresetOutput {
    pub report: serde_json::Value,
    pub pass: bool,
    pub table_name: &'static str,
    pub table: Vec<u8>,
}

fn output<R: Serialize>(report: &R, pass: bool, table_name: &'static str, table: Vec<u8>) -> PresetOutput {
    PresetOutput {
        report: serde_json::to_value(report).expect("reports serialize"),
        pass,
        table_name,
        table,
    }
}

pub fn run_preset(preset: Preset, opts: &PresetOptions) -> Result<PresetOutput, CliError> {
    match preset {
        Preset::Crown => {
            let r = crown(opts)?;
            Ok(output(&r, r.pass, "crown.csv", csv_rows(&r.rows)))
        }
        Preset::TuranSubsample => {
            let (r, rows) = turan_subsample(opts)?;
            Ok(output(&r, r.pass, "subsamples.csv", csv_rows(rows)))
        }
        Preset::Steiner17Half => {
            let (r, rows) = steiner17_half(opts)?;
            Ok(output(&r, r.pass, "builds.csv", csv_rows(rows)))
        }
        Preset::PackingDirect => {
            let r = packing_direct(opts)?;
            Ok(output(&r, r.pass, "runs.csv", csv_rows(&r.runs)))
        }
        Preset::MultipartiteWords => {
            let r = multipartite_words(opts)?;
            Ok(output(&r, r.pass, "words.csv", csv_rows(&r.table)))
        }
    }
}

fn big_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

// crown

#[derive(Clone, Debug, Serialize)]
pub struct CrownRow {
    pub n: usize,
    pub lower_bound: f64,
    pub placements: String,
    pub placements_brute: Option<String>,
    pub ham_count: String,
    pub lower_bound_holds: bool,
    pub brute_matches: Option<bool>,
    /// `P(n) <= n * H(B_n)`.
    pub placements_per_start_le_h: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrownReport {
    pub rows: Vec<CrownRow>,
    pub pass: bool,
}

pub const CROWN_SIZES: [usize; 3] = [8, 10, 12];
const CROWN_BRUTE_MAX: usize = 10;

pub fn crown(opts: &PresetOptions) -> Result<CrownReport, CliError> {
    let mut rows = Vec::new();
    for n in CROWN_SIZES {
        let lower = crown_placement_lower_bound(n).map_err(dom)?;
        let p = count_placements_crown(n).map_err(dom)?;
        let brute = if n <= CROWN_BRUTE_MAX {
            Some(count_placements_crown_brute_force(n).map_err(dom)?)
        } else {
            None
        };
        let h = exact_ham_count_with(&crown_graph(n).map_err(dom)?, &opts.dp).map_err(dom)?.count;
        rows.push(CrownRow {
            n,
            lower_bound: lower.to_f64(),
            lower_bound_holds: lower.le(&p),
            brute_matches: brute.as_ref().map(|b| b == &p),
            placements_brute: brute.map(|b| b.to_string()),
            placements_per_start_le_h: p <= &h * BigUint::from(n),
            placements: p.to_string(),
            ham_count: h.to_string(),
        });
    }
    let pass = rows
        .iter()
        .all(|r| r.lower_bound_holds && r.brute_matches != Some(false) && r.placements_per_start_le_h);
    Ok(CrownReport { rows, pass })
}

// turan subsample

#[derive(Clone, Debug, Serialize)]
pub struct SubsampleRow {
    pub sample: usize,
    pub h: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TuranReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub edges: usize,
    /// Density `q` of the host graph.
    pub host_density: f64,
    pub host_h: String,
    pub p: DensitySpec,
    pub subsample_edges: u128,
    pub samples: usize,
    pub mean_h: MeanEstimate,
    /// `(p/q)^n e^(-2/p) H(G)`.
    pub bound: f64,
    pub mean_over_bound: f64,
    pub pass: bool,
}

pub const TURAN_SAMPLES: usize = 2000;

pub fn turan_subsample(opts: &PresetOptions) -> Result<(TuranReport, Vec<SubsampleRow>), CliError> {
    let (n, k, r) = (9, 4, 3);
    let p = DensitySpec::new(1, 2).map_err(dom)?;
    let samples = opts.samples.unwrap_or(TURAN_SAMPLES);
    let t = multipartite_rgraph(n, k, r).map_err(dom)?;
    let host_h = exact_ham_count_with(&t.graph, &opts.dp).map_err(dom)?.count;
    let total = t.graph.possible_edges().expect("small");
    let need = p.scale(total).map_err(dom)?;
    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(opts.seed, tag::SUBSAMPLE, i as u64);
            let s = sample_exact_density_subgraph(&t.graph, p, &mut rng).map_err(dom)?;
            Ok(exact_ham_count_with(&s, &opts.dp).map_err(dom)?.count)
        })
        .collect::<Result<Vec<BigUint>, CliError>>()?;
    let sum: BigUint = values.iter().sum();
    let sumsq: BigUint = values.iter().map(|v| v * v).sum();
    let mean_h = MeanEstimate::from_sums(samples as u64, big_f64(&sum), big_f64(&sumsq));
    let q = t.graph.density();
    let bound = (p.value() / q).powi(n as i32) * (-2.0 / p.value()).exp() * big_f64(&host_h);
    let report = TuranReport {
        n,
        k,
        r,
        edges: t.graph.edge_count(),
        host_density: q,
        host_h: host_h.to_string(),
        p,
        subsample_edges: need,
        samples,
        mean_over_bound: mean_h.mean / bound,
        pass: mean_h.mean >= bound,
        mean_h,
        bound,
    };
    let rows = values
        .iter()
        .enumerate()
        .map(|(sample, h)| SubsampleRow { sample, h: h.to_string() })
        .collect();
    Ok((report, rows))
}

// steiner17-half

#[derive(Clone, Debug, Serialize)]
pub struct BuildRow {
    pub build: usize,
    pub steiner_edges: usize,
    pub steiner_h: String,
    pub gnm_h: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HSummary {
    pub builds: usize,
    pub mean: MeanEstimate,
    pub max: String,
    pub mean_ratio: RatioReport,
    pub max_ratio: RatioReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub mean_h: f64,
    pub bound: f64,
    /// `2^(log2_bound - log2_bound_ci3)`.
    pub bound_low: f64,
    /// `mean_h >= bound_low`.
    pub strict_pass: bool,
    /// Standard error of `mean_h - bound`, both estimates' noise combined.
    pub combined_sigma: f64,
    /// `mean_h - bound >= -3 * combined_sigma`.
    pub combined_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SteinerHalfReport {
    pub design_valid: bool,
    pub blocks: usize,
    pub groups: usize,
    pub k: usize,
    pub p: DensitySpec,
    pub estimate: EstimateReport,
    pub all_builds_exact_density: bool,
    pub steiner: HSummary,
    pub baseline_gnm: HSummary,
    pub check: BoundCheck,
    pub pass: bool,
}

pub const STEINER_SAMPLES: usize = 20_000;
pub const STEINER_BUILDS: usize = 100;

fn summary(h: &hamforge_core::estimators::HEstimate) -> HSummary {
    HSummary {
        builds: h.values.len(),
        mean: h.mean,
        max: h.max.to_string(),
        mean_ratio: h.mean_ratio.clone(),
        max_ratio: h.max_ratio.clone(),
    }
}

pub fn steiner17_half(opts: &PresetOptions) -> Result<(SteinerHalfReport, Vec<BuildRow>), CliError> {
    let samples = opts.samples.unwrap_or(STEINER_SAMPLES);
    let builds = opts.builds.unwrap_or(STEINER_BUILDS);
    let sys = build_spherical_steiner(2, 4).map_err(dom)?;
    let design_valid = verify_steiner(&sys).pass;
    let k = 2;
    let p = DensitySpec::new(1, 2).map_err(dom)?;
    let mut rng = stream(opts.seed, tag::PARTITION);
    let f = PartitionedFamily::from_steiner(&sys, k, &PartitionConfig::default(), &mut rng).map_err(dom)?;
    let estimate = mc_fbar_and_bound(&f, p, samples, opts.seed).map_err(dom)?;

    let need = p.scale(f.total_edges() as u128).map_err(dom)?;
    let mut edges = Vec::with_capacity(builds);
    let steiner = mc_expected_h(
        |rng| {
            let g = build_quasirandom_from_partition(&f, p, rng)?;
            edges.push(g.edge_count());
            Ok(g)
        },
        p.value(),
        builds,
        opts.seed,
        tag::BUILDER,
        &opts.dp,
    )
    .map_err(dom)?;
    let baseline = mc_expected_h(
        |rng| Ok(sample_gnm(f.n, f.r, need, rng)?),
        p.value(),
        builds,
        opts.seed,
        tag::GNP,
        &opts.dp,
    )
    .map_err(dom)?;

    let bound = estimate.log2_bound.exp2();
    let bound_low = (estimate.log2_bound - estimate.log2_bound_ci3).exp2();
    let sigma_h = steiner.mean.ci3 / 3.0;
    let sigma_b = bound * std::f64::consts::LN_2 * estimate.log2_bound_ci3 / 3.0;
    let combined_sigma = (sigma_h * sigma_h + sigma_b * sigma_b).sqrt();
    let mean_h = steiner.mean.mean;
    let check = BoundCheck {
        mean_h,
        bound,
        bound_low,
        strict_pass: mean_h >= bound_low,
        combined_sigma,
        combined_pass: mean_h - bound >= -3.0 * combined_sigma,
    };
    let all_builds_exact_density = edges.iter().all(|&e| e as u128 == need);
    let rows = (0..builds)
        .map(|b| BuildRow {
            build: b,
            steiner_edges: edges[b],
            steiner_h: steiner.values[b].to_string(),
            gnm_h: baseline.values[b].to_string(),
        })
        .collect();
    let report = SteinerHalfReport {
        design_valid,
        blocks: sys.blocks.len(),
        groups: f.element_groups.len(),
        k,
        p,
        pass: design_valid && all_builds_exact_density && check.strict_pass,
        estimate,
        all_builds_exact_density,
        steiner: summary(&steiner),
        baseline_gnm: summary(&baseline),
        check,
    };
    Ok((report, rows))
}

// packing-direct

#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    pub run: usize,
    pub seed: u64,
    pub success: bool,
    pub attempts: usize,
    pub claim1_failures: usize,
    pub claim2_failures: usize,
    pub claim3_failures: usize,
    pub validation_failures: usize,
    pub low_degree_subsets: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationResult {
    pub mutation: &'static str,
    pub expected_failure: &'static str,
    pub failed_checks: Vec<String>,
    pub detected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectParams {
    pub n: usize,
    pub r: usize,
    pub q: usize,
    pub count: usize,
    pub k: usize,
    pub m: usize,
    pub tau: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingDirectReport {
    pub params: DirectParams,
    pub max_attempts: usize,
    pub runs: Vec<RunRow>,
    pub successes: usize,
    pub success_rate: f64,
    pub required_rate: f64,
    pub rate_pass: bool,
    pub mutations: Vec<MutationResult>,
    pub mutations_pass: bool,
    pub pass: bool,
}

pub const PACKING_RUNS: usize = 20;
pub const PACKING_ATTEMPTS: usize = 50;
pub const PACKING_RATE: f64 = 0.95;
pub const DIRECT: DirectParams = DirectParams {
    n: 60,
    r: 3,
    q: 8,
    count: 210,
    k: 3,
    m: 3,
    tau: 2.0,
};

fn direct_params(d: &DirectParams) -> Result<PackingParams, CliError> {
    PackingParams::direct(d.n, d.r, d.k, d.q, d.count, d.m, d.tau).map_err(dom)
}

fn failed(report: &ValidationReport) -> Vec<String> {
    report.failures().map(|c| c.name.clone()).collect()
}

fn mutation(name: &'static str, expected: &'static str, report: &ValidationReport) -> MutationResult {
    MutationResult {
        mutation: name,
        expected_failure: expected,
        failed_checks: failed(report),
        detected: !report.pass && !report.passed(expected),
    }
}

/// First packing built from `tries` derived seeds.
fn first_packing(params: &PackingParams, seed: u64, tries: usize) -> Option<Packing> {
    let mut seeds = stream(seed, tag::PACKING);
    (0..tries).find_map(|_| build_random_packing(params, seeds.next_u64()).ok().map(|(p, _)| p))
}

/// Replaces an edge of element `j` by an edge of another element lying inside `j`.
fn duplicate_edge(p: &mut Packing) -> bool {
    for j in 0..p.elements.len() {
        let vj = p.elements[j].vertices.clone();
        let found = (0..p.elements.len()).filter(|&i| i != j).find_map(|i| {
            p.elements[i]
                .edges
                .iter()
                .find(|e| e.iter().all(|v| vj.binary_search(v).is_ok()))
                .cloned()
        });
        if let Some(e) = found {
            let el = &mut p.elements[j];
            el.edges.pop();
            el.edges.push(e);
            el.edges.sort();
            return true;
        }
    }
    false
}

/// Swaps two items between groups so that one group gains an intersecting pair.
fn break_group_disjointness(sets: &[Vec<usize>], groups: &mut [Vec<usize>]) -> bool {
    let meets = |a: &[usize], b: &[usize]| a.iter().any(|v| b.binary_search(v).is_ok());
    for g1 in 0..groups.len() {
        for g2 in 0..groups.len() {
            if g1 == g2 {
                continue;
            }
            for i1 in 0..groups[g1].len() {
                for i2 in 0..groups[g2].len() {
                    let a = groups[g1][i1];
                    let b = groups[g2][i2];
                    if groups[g2].iter().any(|&c| c != b && meets(&sets[a], &sets[c])) {
                        groups[g1][i1] = b;
                        groups[g2][i2] = a;
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn mutations(seed: u64) -> Result<Vec<MutationResult>, CliError> {
    let mut out = Vec::new();
    // elements large relative to n, so two of them share a triple
    let roomy = PackingParams::direct(40, 3, 2, 16, 6, 4, 0.0).map_err(dom)?;
    let base = first_packing(&roomy, seed, 20)
        .ok_or_else(|| dom(PackingError::InvalidFamily("no base packing for the mutations".into())))?;

    let mut p = base.clone();
    let applied = duplicate_edge(&mut p);
    let report = hamforge_core::packing::validate_packing(&p, &roomy);
    let mut m = mutation("duplicated edge", "edge_disjoint", &report);
    m.detected &= applied;
    out.push(m);

    let mut p = base;
    let e = p.elements[0].edges.remove(0);
    p.leftover.push(e);
    p.leftover.sort();
    let report = hamforge_core::packing::validate_packing(&p, &roomy);
    out.push(mutation("unequal z", "equal_edge_counts", &report));

    // small elements so that a vertex-disjoint grouping exists
    let sparse = PackingParams::direct(100, 3, 2, 10, 6, 4, 0.0).map_err(dom)?;
    let mut seeds = stream(seed, tag::PACKING);
    let mut rng = stream(seed, tag::PARTITION);
    let mut family = None;
    for _ in 0..20 {
        if let Ok((p, _)) = build_random_packing(&sparse, seeds.next_u64()) {
            if let Ok(f) = PartitionedFamily::from_packing(&p, &PartitionConfig::default(), &mut rng) {
                family = Some(f);
                break;
            }
        }
    }
    let mut f = family.ok_or_else(|| dom(PackingError::InvalidFamily("no base family for the mutations".into())))?;
    let sets: Vec<Vec<usize>> = f.elements.iter().map(|e| e.vertices.clone()).collect();
    let mut applied = break_group_disjointness(&sets, &mut f.element_groups);
    if !applied {
        applied = break_group_disjointness(&f.leftover.clone(), &mut f.leftover_groups);
    }
    let report = f.validate();
    let mut m = mutation("broken disjointness", "group_disjoint", &report);
    m.detected &= applied;
    out.push(m);
    Ok(out)
}

fn run_row(run: usize, seed: u64, success: bool, s: &BuildStats) -> RunRow {
    RunRow {
        run,
        seed,
        success,
        attempts: s.attempts,
        claim1_failures: s.claim1_failures,
        claim2_failures: s.claim2_failures,
        claim3_failures: s.claim3_failures,
        validation_failures: s.validation_failures,
        low_degree_subsets: s.low_degree_subsets,
    }
}

pub fn packing_direct(opts: &PresetOptions) -> Result<PackingDirectReport, CliError> {
    let runs = opts.runs.unwrap_or(PACKING_RUNS);
    let params = direct_params(&DIRECT)?;
    let cfg = BuildConfig {
        max_attempts: PACKING_ATTEMPTS,
    };
    let mut seeds = stream(opts.seed, tag::PACKING);
    let seeds: Vec<u64> = (0..runs).map(|_| seeds.next_u64()).collect();
    let rows = seeds
        .par_iter()
        .enumerate()
        .map(|(run, &seed)| match build_random_packing_with(&params, seed, &cfg) {
            Ok((_, stats)) => Ok(run_row(run, seed, true, &stats)),
            Err(PackingError::RetryBudgetExhausted(stats)) => Ok(run_row(run, seed, false, &stats)),
            Err(e) => Err(dom(e)),
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let successes = rows.iter().filter(|r| r.success).count();
    let success_rate = if runs == 0 { 0.0 } else { successes as f64 / runs as f64 };
    let mutations = mutations(opts.seed)?;
    let mutations_pass = mutations.iter().all(|m| m.detected);
    let rate_pass = success_rate >= PACKING_RATE;
    Ok(PackingDirectReport {
        params: DIRECT,
        max_attempts: PACKING_ATTEMPTS,
        runs: rows,
        successes,
        success_rate,
        required_rate: PACKING_RATE,
        rate_pass,
        mutations,
        mutations_pass,
        pass: rate_pass && mutations_pass,
    })
}

// multipartite words

#[derive(Clone, Debug, Serialize)]
pub struct WordRow {
    pub t: usize,
    pub k: usize,
    pub r: usize,
    pub formula: String,
    pub enumerated: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordsReport {
    pub table: Vec<WordRow>,
    pub table_mismatches: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub requested: usize,
    pub distinct: usize,
    pub invalid_cycles: usize,
    pub exact_h: String,
    pub h_at_least_distinct: bool,
    pub pass: bool,
}

pub const WORD_SAMPLES: usize = 50;

pub fn multipartite_words(opts: &PresetOptions) -> Result<WordsReport, CliError> {
    let mut table = Vec::new();
    for r in 2..=4 {
        for k in r..=5 {
            for t in 1..=8 {
                let formula = count_admissible_words(t, k, r);
                let enumerated = enumerate_admissible(t, k, r).map_err(dom)?.len();
                table.push(WordRow {
                    t,
                    k,
                    r,
                    matches: formula == BigUint::from(enumerated),
                    formula: formula.to_string(),
                    enumerated,
                });
            }
        }
    }
    let table_mismatches = table.iter().filter(|w| !w.matches).count();

    let (n, k, r) = (9, 4, 3);
    let requested = opts.samples.unwrap_or(WORD_SAMPLES);
    let t = multipartite_rgraph(n, k, r).map_err(dom)?;
    let mut rng = stream(opts.seed, tag::WORDS);
    let cycles = sample_good_cycles(&t, requested, &mut rng).map_err(dom)?;
    let invalid_cycles = cycles
        .iter()
        .filter(|c| {
            let pi = c.representative();
            let windows = pi.window_set(r).expect("n > r");
            !(t.graph.has_cycle(pi) && windows.is_subset_of(&t.graph))
        })
        .count();
    let h = exact_ham_count_with(&t.graph, &opts.dp).map_err(dom)?.count;
    let distinct = cycles.len();
    let h_at_least_distinct = h >= BigUint::from(distinct);
    Ok(WordsReport {
        pass: table_mismatches == 0 && invalid_cycles == 0 && distinct == requested && h_at_least_distinct,
        table,
        table_mismatches,
        n,
        k,
        r,
        requested,
        distinct,
        invalid_cycles,
        exact_h: h.to_string(),
        h_at_least_distinct,
    })
}
