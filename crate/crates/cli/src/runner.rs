//! Dispatches scenarios to the numerical library and assembles reports.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use apsflow::counterexample::{
    extended_counterexample, growth_csv, growth_experiment, LambdaRule, SwapBlockSpec, TruncatedSumSpec,
};
use apsflow::evolution::{
    cocycle_defect, convergence_ratio, duhamel_solve, propagate_adaptive, volterra_oracle, AdaptiveOptions,
    Propagator, Scheme, VolterraOptions,
};
use apsflow::family::{make_family_seeded, CounterexampleStage, FamilySpec, HermitianFamily};
use apsflow::index::{
    aps_index_with, commuting_family_check, evolved_pair_with, offdiagonal_diagnostic_with, q_minus_minus_with,
    verify_gluing, verify_main_theorem, IndexOptions, Verdict,
};
use apsflow::linalg::{self, CVector, C64};
use apsflow::spectral::{self, build_flow_partition, sfl_minus_identity_check, spectral_flow_on, PartitionOptions};
use serde_json::{json, Value};

use crate::report::{self, time_str, times_str, Check};
use crate::scenario::{Scenario, Task};

pub const REPORT_DIR_ENV: &str = "REPORT_DIR";
pub const DEFAULT_REPORT_DIR: &str = "reports";
const DEFAULT_STEPS: usize = 256;
const DEFAULT_CHECKPOINTS: usize = 9;
const CLOSED_FORM_PROBES: usize = 16;

/// Command-line overrides applied on top of a scenario.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub tol: Option<f64>,
    pub checkpoints: Option<usize>,
    pub seed: Option<u64>,
}

/// Report and CSV artifacts of one scenario, before anything is written.
#[derive(Clone, Debug)]
pub struct Execution {
    pub name: String,
    pub report: Value,
    /// `(kind, contents)`, written as `<name>.<kind>.csv`.
    pub artifacts: Vec<(String, String)>,
    pub passed: bool,
}

impl Execution {
    pub fn report_text(&self) -> String {
        report::render(&self.report)
    }

    /// Writes the report and artifacts into `dir`, returning the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut files = Vec::new();
        let path = dir.join(format!("{}.report.json", self.name));
        std::fs::write(&path, self.report_text()).with_context(|| format!("writing {}", path.display()))?;
        files.push(path);
        for (kind, text) in &self.artifacts {
            let path = dir.join(format!("{}.{kind}.csv", self.name));
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            files.push(path);
        }
        Ok(files)
    }
}

/// `--out`, then `REPORT_DIR`, then `./reports`.
pub fn report_dir(out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(REPORT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_REPORT_DIR)),
    }
}

struct RunContext {
    family: HermitianFamily,
    index: IndexOptions,
    prop: Propagator,
    seed: u64,
    tol: Option<f64>,
    checkpoints: usize,
}

impl RunContext {
    fn new(scn: &Scenario, over: &Overrides) -> Result<RunContext> {
        let seed = over.seed.unwrap_or(scn.seed);
        let family = make_family_seeded(&scn.family, seed).context("building the family")?;
        let p = &scn.params;
        let defaults = IndexOptions::default();
        let index = IndexOptions {
            steps: over.steps.or(p.steps).unwrap_or(DEFAULT_STEPS),
            scheme: p.scheme.unwrap_or_default(),
            rank_tol: p.rank_tol.unwrap_or(defaults.rank_tol),
            fredholm_margin: p.fredholm_margin.unwrap_or(defaults.fredholm_margin),
            partition: PartitionOptions::default(),
        };
        let prop = Propagator::new(&family, index.steps, index.scheme)?;
        Ok(RunContext {
            family,
            index,
            prop,
            seed,
            tol: over.tol.or(p.tol),
            checkpoints: over.checkpoints.or(p.checkpoints).unwrap_or(DEFAULT_CHECKPOINTS),
        })
    }

    fn horizon(&self) -> f64 {
        self.family.horizon()
    }

    fn adaptive(&self) -> AdaptiveOptions {
        AdaptiveOptions { scheme: self.index.scheme, ..Default::default() }
    }
}

/// Runs a scenario without touching the filesystem.
pub fn execute(scn: &Scenario, over: &Overrides) -> Result<Execution> {
    let ctx = RunContext::new(scn, over).with_context(|| format!("scenario `{}`", scn.name))?;
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    let result = run_task(scn, &ctx, &mut checks, &mut artifacts).with_context(|| format!("scenario `{}`", scn.name))?;
    let identities = identities(scn, &ctx, &mut checks).with_context(|| format!("scenario `{}`: identities", scn.name))?;
    let passed = checks.iter().all(|c| c.passed);
    let report = json!({
        "schema_version": report::SCHEMA_VERSION,
        "scenario": scn.name,
        "description": scn.description,
        "task": scn.task.as_str(),
        "seed": ctx.seed,
        "family": {
            "spec": scn.family,
            "kind": ctx.family.kind(),
            "dim": ctx.family.dim(),
            "horizon": time_str(ctx.horizon()),
        },
        "settings": {
            "steps": ctx.index.steps,
            "scheme": ctx.index.scheme,
            "rank_tol": ctx.index.rank_tol,
            "fredholm_margin": ctx.index.fredholm_margin,
            "tol": ctx.tol,
            "checkpoints": ctx.checkpoints,
        },
        "result": result,
        "identities": identities,
        "checks": checks,
        "passed": passed,
    });
    Ok(Execution { name: scn.name.clone(), report, artifacts, passed })
}

/// Runs a scenario and writes its files into `dir`.
pub fn run_scenario(scn: &Scenario, over: &Overrides, dir: &Path) -> Result<(Execution, Vec<PathBuf>)> {
    let exec = execute(scn, over)?;
    let files = exec.write(dir)?;
    Ok((exec, files))
}

fn run_task(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>, artifacts: &mut Vec<(String, String)>) -> Result<Value> {
    if let Some(samples) = scn.params.eigenpath_samples {
        artifacts.push(("eigenpaths".into(), report::eigenpath_csv(&ctx.family, samples)?));
    }
    match scn.task {
        Task::Sfl => task_sfl(scn, ctx, checks),
        Task::Evolve => task_evolve(scn, ctx, checks),
        Task::ApsIndex => task_aps(scn, ctx, checks),
        Task::VerifyMain => task_main(scn, ctx, checks, artifacts),
        Task::VerifyGluing => task_gluing(scn, ctx, checks),
        Task::Diagnostic => task_diagnostic(scn, ctx, checks, artifacts),
        Task::CounterexampleGrowth => task_growth(scn, ctx, checks, artifacts),
    }
}

/// Three partitions built with different segment counts, probe densities
/// and seed levels.
pub fn independent_partitions() -> [PartitionOptions; 3] {
    [
        PartitionOptions::default(),
        PartitionOptions { initial_segments: 5, probes_per_segment: 9, ..Default::default() },
        PartitionOptions { initial_segments: 3, probes_per_segment: 25, seed_level: Some(0.37), ..Default::default() },
    ]
}

fn task_sfl(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>) -> Result<Value> {
    let mut flows = Vec::new();
    let mut partitions = Vec::new();
    for opts in independent_partitions() {
        let p = build_flow_partition(&ctx.family, false, &opts)?;
        flows.push(spectral_flow_on(&ctx.family, &p, &opts.tolerances)?);
        partitions.push(p);
    }
    let sfl = flows[0];
    checks.push(Check::new("partition-independence", "all equal", &flows, flows.iter().all(|&v| v == sfl)));
    if let Some(e) = scn.expect.sfl {
        checks.push(Check::equal("sfl", e, sfl));
    }
    let p = &partitions[0];
    Ok(json!({
        "sfl": sfl,
        "partition_sfl": flows,
        "segments": partitions.iter().map(|p| p.segments()).collect::<Vec<_>>(),
        "nodes": times_str(&p.nodes),
        "levels": p.levels,
        "min_margin": p.min_margin,
    }))
}

/// Smooth deterministic source term `g_j(t) = cos(t + j) + i sin(2t - j)`.
fn duhamel_source(dim: usize) -> impl Fn(f64) -> CVector + Copy {
    move |t: f64| CVector::from_iterator(dim, (0..dim).map(|j| C64::new((t + j as f64).cos(), (2.0 * t - j as f64).sin())))
}

fn task_evolve(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>) -> Result<Value> {
    let p = &scn.params;
    let horizon = ctx.horizon();
    let q = ctx.prop.evolve(horizon, 0.0)?;
    let unitarity = linalg::unitarity_defect(&q);
    let cocycle = cocycle_defect(&ctx.prop, horizon, 0.5 * horizon, 0.0)?
        .max(cocycle_defect(&ctx.prop, horizon / 3.0, 2.0 * horizon / 3.0, horizon)?);
    checks.push(Check::at_most("unitarity", 1e-9, unitarity));
    checks.push(Check::at_most("cocycle", 1e-9, cocycle));
    let mut out = json!({
        "t": time_str(horizon),
        "s": "0",
        "unitarity_defect": unitarity,
        "cocycle_defect": cocycle,
    });

    let adaptive = match ctx.tol {
        Some(tol) => {
            let a = propagate_adaptive(&ctx.family, horizon, 0.0, tol, &ctx.adaptive())?;
            out["adaptive"] = json!({ "tol": tol, "steps": a.steps, "differences": a.differences, "ratios": a.ratios });
            Some(a.unitary)
        }
        None => None,
    };

    if let Some(ns) = &p.ratio_steps {
        let rows = ns
            .iter()
            .map(|&n| Ok((n, convergence_ratio(&ctx.family, horizon, 0.0, n, Scheme::RightEndpoint)?)))
            .collect::<Result<Vec<_>>>()?;
        for &(n, r) in &rows {
            if let Some(range) = scn.expect.ratio_range {
                checks.push(Check::within(format!("convergence-ratio-n{n}"), range, r));
            }
        }
        out["convergence"] = json!(rows.iter().map(|(n, r)| json!({ "n": n, "ratio": r })).collect::<Vec<_>>());
    }

    if p.volterra == Some(true) {
        let reference = adaptive.clone().unwrap_or_else(|| q.clone());
        let v = volterra_oracle(&ctx.family, horizon, 0.0, &VolterraOptions::default())?;
        let err = linalg::frobenius(&(v - reference));
        let sup = ctx.family.probe_times(65).iter().map(|&t| linalg::spectral_norm(&ctx.family.evaluate(t))).fold(0.0, f64::max);
        out["volterra"] = json!({
            "terms": VolterraOptions::default().terms,
            "nodes": VolterraOptions::default().nodes,
            "length_times_norm": horizon * sup,
            "error": err,
        });
        if let Some(bound) = scn.expect.max_volterra_error {
            checks.push(Check::at_most("volterra-error", bound, err));
        }
    }

    if let Some(ns) = &p.duhamel {
        let g = duhamel_source(ctx.family.dim());
        let x = CVector::from_iterator(ctx.family.dim(), (0..ctx.family.dim()).map(|j| C64::new(1.0 / (j + 1) as f64, 0.0)));
        let residuals = ns
            .iter()
            .map(|&n| {
                let prop = Propagator::new(&ctx.family, n, Scheme::RightEndpoint)?;
                Ok(duhamel_solve(&prop, 0.0, &x, g)?.max_residual(&ctx.family, g))
            })
            .collect::<Result<Vec<f64>>>()?;
        let ratio = residuals[0] / residuals[1];
        if let Some(range) = scn.expect.ratio_range {
            checks.push(Check::within("duhamel-residual-ratio", range, ratio));
        }
        out["duhamel"] = json!({ "steps": ns, "residuals": residuals, "ratio": ratio });
    }

    if p.closed_form == Some(true) {
        let FamilySpec::SwapBlock { lambda1, lambda2 } = scn.family else {
            bail!("closed_form comparison needs a swap-block family");
        };
        let spec = SwapBlockSpec::new(lambda1, lambda2)?;
        let mut max_err: f64 = 0.0;
        for k in 1..=CLOSED_FORM_PROBES {
            let t = k as f64 / CLOSED_FORM_PROBES as f64;
            max_err = max_err.max(linalg::frobenius(&(ctx.prop.evolve(t, 0.0)? - spec.closed_form(t))));
        }
        let e1 = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let target = CVector::from_vec(vec![C64::new(0.0, 0.0), C64::from_polar(1.0, lambda2)]);
        let endpoint = linalg::vector_norm(&(ctx.prop.apply(1.0, 0.0, &e1)? - target));
        let adaptive_err = adaptive.as_ref().map(|a| linalg::frobenius(&(a - spec.closed_form(1.0))));
        if let Some(bound) = scn.expect.max_closed_form_error {
            checks.push(Check::at_most("closed-form-probes", bound, max_err));
            checks.push(Check::at_most("closed-form-endpoint", bound, endpoint));
            if let Some(e) = adaptive_err {
                checks.push(Check::at_most("closed-form-adaptive", bound, e));
            }
        }
        let bounds = spec.bounds();
        out["closed_form"] = json!({
            "probes": CLOSED_FORM_PROBES,
            "max_error": max_err,
            "endpoint_error": endpoint,
            "adaptive_error": adaptive_err,
            "ramp": spec.stats,
            "block_bounds": bounds,
        });
        checks.push(Check::new("block-bounds", "|b| <= 2, |b'| <= c(|l1-l2|+1)", (bounds.max_b_norm, bounds.max_db_norm), bounds.within_bounds));
    }
    Ok(out)
}

fn index_expectations(scn: &Scenario, checks: &mut Vec<Check>, kernel: usize, coker: usize, index: i64, sfl: i64, verdict: Verdict) {
    let e = &scn.expect;
    if let Some(v) = e.sfl {
        checks.push(Check::equal("sfl", v, sfl));
    }
    if let Some(v) = e.index {
        checks.push(Check::equal("index", v, index));
    }
    if let Some(v) = e.kernel_dim {
        checks.push(Check::equal("kernel_dim", v, kernel));
    }
    if let Some(v) = e.coker_dim {
        checks.push(Check::equal("coker_dim", v, coker));
    }
    if let Some(v) = e.verdict {
        checks.push(Check::equal("verdict", v, verdict));
    }
}

fn task_aps(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>) -> Result<Value> {
    let aps = aps_index_with(&ctx.prop, &ctx.index)?;
    let qmm = q_minus_minus_with(&ctx.prop, ctx.horizon(), &ctx.index)?;
    let r = &aps.report;
    let sfl = r.sfl_value.expect("aps_index records the spectral flow");
    index_expectations(scn, checks, r.kernel_dim, r.coker_dim, r.index, sfl, r.verdict);
    checks.push(Check::equal("q-minus-minus-agrees", true, qmm.agrees && qmm.report.index == aps.pair_index));
    let mut out = json!({
        "aps": aps,
        "q_minus_minus": { "index": qmm.report.index, "kernel_dim": qmm.report.kernel_dim, "coker_dim": qmm.report.coker_dim, "agrees": qmm.agrees },
    });
    if let FamilySpec::Counterexample { blocks, lambdas, stage: CounterexampleStage::Extended } = &scn.family {
        let spec = TruncatedSumSpec::new(*blocks, lambdas.clone(), CounterexampleStage::Extended)?;
        let (_, expected) = extended_counterexample(&spec)?;
        out["truncation"] = json!(expected);
    }
    Ok(out)
}

fn task_main(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>, artifacts: &mut Vec<(String, String)>) -> Result<Value> {
    let r = verify_main_theorem(&ctx.family, ctx.checkpoints, &ctx.index)?;
    if let Some(v) = scn.expect.verdict {
        checks.push(Check::equal("verdict", v, r.verdict));
    }
    checks.push(Check::new(
        "no-mismatch",
        "index = sfl wherever well conditioned",
        r.verdict,
        r.verdict != Verdict::Mismatch,
    ));
    let mut csv = String::from("t,index,sfl,kernel_dim,coker_dim,sigma_min\n");
    for c in &r.checkpoints {
        csv.push_str(&format!(
            "{},{},{},{},{},{:e}\n",
            time_str(c.t),
            c.index,
            c.sfl,
            c.kernel_dim,
            c.coker_dim,
            c.sigma_min.unwrap_or(f64::NAN)
        ));
    }
    artifacts.push(("checkpoints".into(), csv));
    let rows: Vec<Value> = r
        .checkpoints
        .iter()
        .map(|c| {
            json!({
                "t": time_str(c.t), "index": c.index, "sfl": c.sfl, "kernel_dim": c.kernel_dim,
                "coker_dim": c.coker_dim, "sigma_min": c.sigma_min, "verdict": c.verdict,
            })
        })
        .collect();
    Ok(json!({ "checkpoints": rows, "verdict": r.verdict, "sigma_min": r.sigma_min }))
}

fn gluing_times(scn: &Scenario, ctx: &RunContext) -> Result<(f64, f64, f64)> {
    let p = &scn.params;
    let r = p.r.as_ref().map(|v| v.value()).transpose()?.unwrap_or(0.0);
    let t = p.t.as_ref().map(|v| v.value()).transpose()?.unwrap_or(ctx.horizon());
    let s = p.s.as_ref().expect("validated").value()?;
    Ok((r, s, t))
}

fn task_gluing(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>) -> Result<Value> {
    let (r, s, t) = gluing_times(scn, ctx)?;
    let g = verify_gluing(&ctx.family, r, s, t, &ctx.index)?;
    checks.push(Check::equal("additive", true, g.passed));
    if let Some(e) = scn.expect.gluing {
        checks.push(Check::equal("gluing", e, [g.whole, g.first, g.second]));
    }
    Ok(json!({
        "r": time_str(r), "s": time_str(s), "t": time_str(t),
        "whole": g.whole, "first": g.first, "second": g.second, "passed": g.passed,
    }))
}

fn task_diagnostic(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>, artifacts: &mut Vec<(String, String)>) -> Result<Value> {
    let t = scn.params.t.as_ref().map(|v| v.value()).transpose()?.unwrap_or(ctx.horizon());
    let d = offdiagonal_diagnostic_with(&ctx.prop, t, &ctx.index)?;
    let commuting = commuting_family_check(&ctx.family, &ctx.index)?;
    if let Some(profile) = scn.expect.profile {
        checks.push(Check::equal("q-plus-minus-profile", profile, d.q_plus_minus.profile));
        checks.push(Check::equal("q-minus-plus-profile", profile, d.q_minus_plus.profile));
    }
    checks.push(Check::equal("commuting-check", true, commuting.passed));
    artifacts.push((
        "singular-values".into(),
        report::singular_value_csv(&[
            ("q_plus_minus", &d.q_plus_minus.values),
            ("q_minus_plus", &d.q_minus_plus.values),
            ("difference", &d.difference.values),
        ]),
    ));
    Ok(json!({
        "t": time_str(t),
        "q_plus_minus": d.q_plus_minus,
        "q_minus_plus": d.q_minus_plus,
        "difference": d.difference,
        "commuting": commuting,
    }))
}

fn task_growth(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>, artifacts: &mut Vec<(String, String)>) -> Result<Value> {
    let ns = scn.params.ns.clone().expect("validated");
    let rule = LambdaRule::Linear { scale: scn.params.lambda_scale.unwrap_or(5.0) };
    let rows = growth_experiment(&ns, rule, &ctx.index)?;
    let e = &scn.expect;
    for r in &rows {
        if e.kernel_equals_n == Some(true) {
            checks.push(Check::equal(format!("kernel_dim-N{}", r.n), r.n, r.kernel_dim));
        }
        if let Some(v) = e.sfl {
            checks.push(Check::equal(format!("sfl-N{}", r.n), v, r.sfl));
        }
        if let Some(v) = e.index {
            checks.push(Check::equal(format!("index-N{}", r.n), v, r.index));
        }
    }
    artifacts.push(("growth".into(), growth_csv(&rows)));
    Ok(json!({ "lambda_rule": rule, "rows": rows }))
}

const GLUING_CANDIDATES: [f64; 5] = [0.5, 0.3, 0.7, 0.4, 0.6];

/// Interior split with zero off the spectrum, for the gluing identity.
fn gluing_split(scn: &Scenario, ctx: &RunContext) -> Result<f64> {
    if scn.task == Task::VerifyGluing {
        return Ok(gluing_times(scn, ctx)?.1);
    }
    let tol = &ctx.index.partition.tolerances;
    for c in GLUING_CANDIDATES {
        let s = c * ctx.horizon();
        if spectral::decompose(&ctx.family, s)?.indices_below(0.0, tol).is_ok() {
            return Ok(s);
        }
    }
    bail!("no split point off the spectrum among {GLUING_CANDIDATES:?}")
}

fn identities(scn: &Scenario, ctx: &RunContext, checks: &mut Vec<Check>) -> Result<Value> {
    let minflow = sfl_minus_identity_check(&ctx.family, &ctx.index.partition)?;
    checks.push(Check::equal("identity-minflow", true, minflow.passed));

    let aps = aps_index_with(&ctx.prop, &ctx.index)?;
    checks.push(Check::equal("identity-ind-d", true, aps.consistent));

    let pair = evolved_pair_with(&ctx.prop, ctx.horizon(), &ctx.index)?;
    let pr = pair.report(ctx.index.fredholm_margin);
    let rank_gap = pair.rank_p() as i64 - pair.rank_q() as i64;
    checks.push(Check::equal("identity-rank-nullity", rank_gap, pr.index));

    let s = gluing_split(scn, ctx)?;
    let g = verify_gluing(&ctx.family, 0.0, s, ctx.horizon(), &ctx.index)?;
    checks.push(Check::equal("identity-gluing", true, g.passed));

    Ok(json!({
        "minflow": minflow,
        "ind_d": {
            "aps_kernel_dim": aps.report.kernel_dim,
            "aps_coker_dim": aps.report.coker_dim,
            "aps_index": aps.report.index,
            "pair_index": aps.pair_index,
            "consistent": aps.consistent,
        },
        "rank_nullity": { "rank_p": pair.rank_p(), "rank_q": pair.rank_q(), "index": pr.index, "passed": rank_gap == pr.index },
        "gluing": { "s": time_str(s), "whole": g.whole, "first": g.first, "second": g.second, "passed": g.passed },
    }))
}
