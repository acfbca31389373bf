use serde::Serialize;

use hamforge_core::constructions::{crown_graph, multipartite_rgraph, turan_graph};
use hamforge_core::estimators::{mc_fbar_and_bound, EstimateReport};
use hamforge_core::geometry::{build_spherical_steiner, read_design, verify_steiner, write_design};
use hamforge_core::hypergraph::{read_hypergraph, write_hypergraph};
use hamforge_core::packing::{
    build_random_packing_with, default_beta, read_packing, validate_packing, write_packing, BuildConfig,
    PackingParams, PartitionConfig, PartitionedFamily,
};
use hamforge_core::randmodels::{
    audit_quasirandomness, build_quasirandom_from_partition, sample_gnm, sample_gnp, DensitySpec, QuasiRandomParams,
};
use hamforge_core::report::ValidationReport;
use hamforge_core::rng::{stream, tag};
use hamforge_core::Hypergraph;

use crate::presets::{self, PresetOptions};
use crate::{
    count_with, csv_rows, dom, json, method_name, open, read_to_string, usage, write_file, AuditArgs, BuildArgs,
    CliError, Command, ConstructArgs, CountArgs, Ctx, EstimateArgs, ExperimentArgs, FamilyArgs, Format, GraphKind,
    PackArgs, SteinerArgs,
};

pub(crate) fn dispatch(ctx: &mut Ctx<'_>) -> Result<(), CliError> {
    match &ctx.cli.command {
        Command::Construct(a) => construct(ctx, a),
        Command::Count(a) => count(ctx, a),
        Command::Steiner(a) => steiner(ctx, a),
        Command::Pack(a) => pack(ctx, a),
        Command::Family(a) => family(ctx, a),
        Command::Build(a) => build(ctx, a),
        Command::Audit(a) => audit(ctx, a),
        Command::Estimate(a) => estimate(ctx, a),
        Command::Experiment(a) => experiment(ctx, a),
    }
}

fn graph_bytes(g: &Hypergraph) -> Vec<u8> {
    let mut buf = Vec::new();
    write_hypergraph(g, &mut buf).expect("in-memory write");
    buf
}

fn need<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--{flag} is required for {what}")))
}

fn construct(ctx: &mut Ctx<'_>, a: &ConstructArgs) -> Result<(), CliError> {
    let graph_only = |kind: &str| match a.r {
        None | Some(2) => Ok(()),
        Some(r) => Err(usage(format!("--r {r}: {kind} graphs have r = 2"))),
    };
    let r = a.r.unwrap_or(3);
    let mut rng = stream(a.seed, tag::GNP);
    let g = match a.kind {
        GraphKind::Crown => {
            graph_only("crown")?;
            crown_graph(a.n).map_err(dom)?
        }
        GraphKind::Turan => {
            graph_only("turan")?;
            turan_graph(a.n, need(a.k, "k", "turan")?).map_err(dom)?.graph
        }
        GraphKind::Multipartite => multipartite_rgraph(a.n, need(a.k, "k", "multipartite")?, r).map_err(dom)?.graph,
        GraphKind::Complete => Hypergraph::complete(a.n, r).map_err(dom)?,
        GraphKind::Gnp => sample_gnp(a.n, r, need(a.p, "p", "gnp")?.value(), &mut rng).map_err(dom)?,
        GraphKind::Gnm => sample_gnm(a.n, r, need(a.m, "m", "gnm")?, &mut rng).map_err(dom)?,
    };
    ctx.emit(a.out.as_deref(), &graph_bytes(&g))
}

#[derive(Serialize)]
struct CountOut {
    count: String,
    method: &'static str,
    n: usize,
    r: usize,
    edges: usize,
}

fn count(ctx: &mut Ctx<'_>, a: &CountArgs) -> Result<(), CliError> {
    let g = read_hypergraph(open(&a.input)?).map_err(dom)?;
    let res = count_with(&g, a.method, &ctx.dp)?;
    let out = CountOut {
        count: res.count.to_string(),
        method: method_name(res.method),
        n: g.n(),
        r: g.r(),
        edges: g.edge_count(),
    };
    let bytes = match ctx.cli.format {
        Format::Json => json(&out),
        Format::Csv => csv_rows([out]),
    };
    ctx.emit(a.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct SteinerOut {
    q: u32,
    s: u32,
    n: usize,
    block_size: usize,
    blocks: usize,
    point_degree: usize,
    verification: ValidationReport,
}

fn steiner(ctx: &mut Ctx<'_>, a: &SteinerArgs) -> Result<(), CliError> {
    let sys = build_spherical_steiner(a.q, a.s).map_err(dom)?;
    let report = verify_steiner(&sys);
    let mut design = Vec::new();
    write_design(&sys, &mut design).expect("in-memory write");
    let Some(out) = &a.out else {
        return ctx.emit(None, &design);
    };
    write_file(out, &design)?;
    let summary = SteinerOut {
        q: sys.q,
        s: sys.s,
        n: sys.n,
        block_size: sys.block_size(),
        blocks: sys.blocks.len(),
        point_degree: sys.expected_point_degree(),
        verification: report,
    };
    ctx.emit(None, &json(&summary))
}

#[derive(Serialize)]
struct PackOut<'a> {
    mode: &'static str,
    n: usize,
    r: usize,
    q: usize,
    count: usize,
    k: usize,
    m: usize,
    z: usize,
    leftover: usize,
    stats: &'a hamforge_core::packing::BuildStats,
    validation: ValidationReport,
}

fn pack(ctx: &mut Ctx<'_>, a: &PackArgs) -> Result<(), CliError> {
    let direct = [a.q.is_some(), a.count.is_some(), a.m.is_some(), a.tau.is_some()];
    let faithful = a.beta.is_some() || a.delta.is_some();
    let (params, mode) = if direct.iter().any(|&d| d) {
        if faithful {
            return Err(usage("--beta/--delta (faithful mode) cannot be combined with --q/--count/--m/--tau"));
        }
        let what = "direct mode";
        let params = PackingParams::direct(
            a.n,
            a.r,
            a.k,
            need(a.q, "q", what)?,
            need(a.count, "count", what)?,
            need(a.m, "m", what)?,
            need(a.tau, "tau", what)?,
        );
        (params, "direct")
    } else {
        let delta = need(a.delta, "delta", "faithful mode (or give --q --count --m --tau)")?;
        let beta = a.beta.unwrap_or_else(|| default_beta(a.r, delta));
        (PackingParams::faithful(a.n, a.r, a.k, beta, delta), "faithful")
    };
    let params = params.map_err(dom)?;
    let cfg = BuildConfig {
        max_attempts: a.attempts,
    };
    let (p, stats) = build_random_packing_with(&params, a.seed, &cfg).map_err(dom)?;
    let validation = validate_packing(&p, &params);
    let mut file = Vec::new();
    write_packing(&p, &mut file).expect("in-memory write");
    let summary = PackOut {
        mode,
        n: p.n,
        r: p.r,
        q: p.q,
        count: params.count(),
        k: p.k,
        m: params.m(),
        z: p.z,
        leftover: p.leftover.len(),
        stats: &stats,
        validation,
    };
    match &a.out {
        Some(out) => {
            write_file(out, &file)?;
            ctx.emit(None, &json(&summary))
        }
        None => ctx.emit(None, &file),
    }
}

fn family(ctx: &mut Ctx<'_>, a: &FamilyArgs) -> Result<(), CliError> {
    let cfg = PartitionConfig::default();
    let mut rng = stream(a.seed, tag::PARTITION);
    let f = if let Some(d) = &a.design {
        let sys = read_design(open(d)?).map_err(dom)?;
        PartitionedFamily::from_steiner(&sys, need(a.k, "k", "--design")?, &cfg, &mut rng).map_err(dom)?
    } else if let Some(pk) = &a.packing {
        let p = read_packing(open(pk)?).map_err(dom)?;
        if let Some(k) = a.k.filter(|&k| k != p.k) {
            return Err(usage(format!("--k {k} disagrees with the packing's k = {}", p.k)));
        }
        PartitionedFamily::from_packing(&p, &cfg, &mut rng).map_err(dom)?
    } else if a.singletons {
        if a.k.is_some_and(|k| k != 1) {
            return Err(usage("--singletons families have k = 1"));
        }
        PartitionedFamily::singletons(need(a.n, "n", "--singletons")?, need(a.r, "r", "--singletons")?)
            .map_err(dom)?
    } else {
        return Err(usage("one of --design, --packing or --singletons is required"));
    };
    let mut text = f.to_json();
    text.push('\n');
    ctx.emit(a.out.as_deref(), text.as_bytes())
}

fn load_family(path: &std::path::Path) -> Result<PartitionedFamily, CliError> {
    PartitionedFamily::from_json(&read_to_string(path)?).map_err(dom)
}

fn build(ctx: &mut Ctx<'_>, a: &BuildArgs) -> Result<(), CliError> {
    let f = load_family(&a.family)?;
    let spec = match (a.p, a.l, a.k) {
        (Some(p), _, _) => p.density()?,
        (None, Some(l), Some(k)) => DensitySpec::new(l, k).map_err(dom)?,
        _ => return Err(usage("--p NUM/DEN or --l with --k is required")),
    };
    let mut rng = stream(a.seed, tag::BUILDER);
    let g = build_quasirandom_from_partition(&f, spec, &mut rng).map_err(dom)?;
    ctx.emit(a.out.as_deref(), &graph_bytes(&g))
}

#[derive(Serialize)]
struct DensityRow {
    index: usize,
    density: f64,
}

fn audit(ctx: &mut Ctx<'_>, a: &AuditArgs) -> Result<(), CliError> {
    let g = read_hypergraph(open(&a.input)?).map_err(dom)?;
    let params = QuasiRandomParams {
        epsilon: a.eps,
        samples: a.samples,
        extra_subsets: Vec::new(),
    };
    let report = audit_quasirandomness(&g, &params, a.seed).map_err(dom)?;
    let bytes = match ctx.cli.format {
        Format::Json => json(&report),
        Format::Csv => csv_rows(
            report
                .densities
                .iter()
                .enumerate()
                .map(|(index, &density)| DensityRow { index, density }),
        ),
    };
    ctx.emit(a.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct KeyValue {
    key: &'static str,
    value: String,
}

fn estimate_rows(r: &EstimateReport) -> Vec<KeyValue> {
    let kv = |key, value: String| KeyValue { key, value };
    vec![
        kv("family", r.family.clone()),
        kv("n", r.n.to_string()),
        kv("r", r.r.to_string()),
        kv("p", r.p.to_string()),
        kv("samples", r.samples.to_string()),
        kv("bad_fraction", r.bad_fraction.mean.to_string()),
        kv("bad_fraction_ci3", r.bad_fraction.ci3.to_string()),
        kv("fbar", r.fbar.mean.to_string()),
        kv("fbar_ci3", r.fbar.ci3.to_string()),
        kv("gbar", r.gbar.mean.to_string()),
        kv("gbar_ci3", r.gbar.ci3.to_string()),
        kv("gbar_star", r.gbar_star.mean.to_string()),
        kv("gbar_star_ci3", r.gbar_star.ci3.to_string()),
        kv("gbar_star_exact", r.gbar_star_exact.map(|x| x.to_string()).unwrap_or_default()),
        kv("f_bound_violations", r.f_bound_violations.to_string()),
        kv("union_bound_bad", r.union_bound_bad.to_string()),
        kv("log2_bound", r.log2_bound.to_string()),
        kv("log2_bound_ci3", r.log2_bound_ci3.to_string()),
        kv("log2_e", r.log2_e.to_string()),
        kv("log2_ratio", r.log2_ratio.to_string()),
        kv("seed", r.seed.to_string()),
    ]
}

fn estimate(ctx: &mut Ctx<'_>, a: &EstimateArgs) -> Result<(), CliError> {
    let f = load_family(&a.family)?;
    let report = mc_fbar_and_bound(&f, a.p.density()?, a.samples, a.seed).map_err(dom)?;
    let bytes = match ctx.cli.format {
        Format::Json => json(&report),
        Format::Csv => csv_rows(estimate_rows(&report)),
    };
    ctx.emit(a.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct ExperimentOut<'a> {
    config: crate::RunConfig<'a>,
    preset: &'static str,
    pass: bool,
    report: serde_json::Value,
}

fn experiment(ctx: &mut Ctx<'_>, a: &ExperimentArgs) -> Result<(), CliError> {
    let opts = PresetOptions {
        seed: a.seed,
        samples: a.samples,
        builds: a.builds,
        runs: a.runs,
        dp: ctx.dp.clone(),
    };
    let out = presets::run_preset(a.preset, &opts)?;
    let doc = json(&ExperimentOut {
        config: ctx.config(),
        preset: a.preset.name(),
        pass: out.pass,
        report: out.report,
    });
    match &a.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
            write_file(&dir.join("report.json"), &doc)?;
            write_file(&dir.join(out.table_name), &out.table)?;
            let line = format!("{} {}\n", a.preset.name(), if out.pass { "pass" } else { "fail" });
            ctx.emit(None, line.as_bytes())
        }
        None => match ctx.cli.format {
            Format::Json => ctx.emit(None, &doc),
            Format::Csv => ctx.emit(None, &out.table),
        },
    }
}
