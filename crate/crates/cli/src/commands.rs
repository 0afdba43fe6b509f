use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sparsehard::label_cover::smoothness;
use sparsehard::reduction::coherence;
use sparsehard::reduction::CoherenceScope;
use sparsehard::solvers::binomial;
use sparsehard::vector_systems::{build_hadamard_code_set, build_incoherent_vector_system, verify_code_set, verify_system};
use sparsehard::Limits;

use crate::cli::{BenchArgs, Cli, Command, Family, GenerateArgs, OutputFormat, ReduceArgs, ReductionArgs, SolveArgs, VerifyTarget};
use crate::config::{parse_clauses, BaseInstance, ExperimentConfig, GeneratorSpec, ReductionSpec, SolverKind, Source};
use crate::error::{exit, invalid, CliResult};
use crate::format::{
    read_document, to_pretty, write_atomic, CoherenceDoc, CoherencePair, Document, LabelCoverDoc, ReductionKindDoc,
    ReferenceKind, SparseInstanceDoc,
};
use crate::report::{render_table, run_experiment, GapReport};

/// Text for standard output plus the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: exit::SUCCESS }
    }

    fn checked(text: String, passed: bool) -> Self {
        Outcome { text, code: if passed { exit::SUCCESS } else { exit::PROPERTY } }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(cli, args),
        Command::Reduce(args) => cmd_reduce(cli, args),
        Command::Solve(args) => cmd_solve(cli, args),
        Command::Verify { target } => cmd_verify(cli, target),
        Command::Bench(args) => cmd_bench(cli, args),
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits::default()
        .with_max_dimension(usize::try_from(cli.cap_dim).unwrap_or(usize::MAX))
        .with_max_search(cli.cap_supports.into())
}

fn record<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("records serialize");
    s.push('\n');
    s
}

/// Writes `doc` to `--out`, or returns it as the command output.
fn emit<T: Serialize>(cli: &Cli, doc: &T, summary: impl FnOnce() -> (String, serde_json::Value)) -> CliResult<Outcome> {
    match &cli.out {
        Some(path) => {
            write_atomic(path, &to_pretty(doc))?;
            let (table, mut rec) = summary();
            rec["path"] = path.display().to_string().into();
            Ok(Outcome::ok(match cli.format {
                OutputFormat::Table => format!("wrote {}\n{table}", path.display()),
                OutputFormat::Record => record(&rec),
            }))
        }
        None => Ok(Outcome::ok(match cli.format {
            OutputFormat::Table => to_pretty(doc),
            OutputFormat::Record => record(doc),
        })),
    }
}

fn reduction_spec(args: &ReductionArgs) -> Option<ReductionSpec> {
    args.reduction.map(|kind| ReductionSpec { kind, ell: args.ell, t_declared: args.t_declared })
}

fn generator_spec(args: &GenerateArgs) -> CliResult<GeneratorSpec> {
    let (num_v, num_w, degree) = (args.num_v, args.num_w, args.degree);
    Ok(match args.family {
        Family::PlantedProjection => {
            GeneratorSpec::PlantedProjection { num_v, num_w, sigma_v: args.sigma_v, sigma_w: args.sigma_w, degree }
        }
        Family::PlantedUnique => GeneratorSpec::PlantedUnique { num_v, num_w, labels: args.labels, degree },
        Family::RandomUnique => GeneratorSpec::RandomUnique { num_v, num_w, labels: args.labels, degree },
        Family::AntiSatisfiable => GeneratorSpec::AntiSatisfiable { labels: args.labels, cycle: args.cycle },
        Family::Formula => {
            let text = args.clauses.as_deref().ok_or_else(|| invalid("--family formula needs --clauses"))?;
            GeneratorSpec::Formula { clauses: parse_clauses(text)?, repeat: args.repeat }
        }
        Family::RandomFormula => GeneratorSpec::RandomFormula { vars: args.vars, repeat: args.repeat },
    })
}

fn label_cover_summary(doc: &LabelCoverDoc) -> (String, serde_json::Value) {
    let table = format!(
        "label cover ({:?}): |V| = {}, |W| = {}, |Σ_V| = {}, |Σ_W| = {}, |E| = {}\n",
        doc.flavor, doc.num_v, doc.num_w, doc.sigma_v, doc.sigma_w, doc.num_edges
    );
    let rec = serde_json::json!({
        "kind": doc.kind,
        "num_v": doc.num_v,
        "num_w": doc.num_w,
        "sigma_v": doc.sigma_v,
        "sigma_w": doc.sigma_w,
        "num_edges": doc.num_edges,
    });
    (table, rec)
}

fn coherence_line(name: &str, c: &CoherenceDoc) -> String {
    format!(
        "mu {name:<7} {:.6} (mu^2 = {}, witness {:?}, bound {}: {})\n",
        c.mu,
        c.mu_squared,
        c.witness,
        c.bound_claimed,
        if c.bound_satisfied { "holds" } else { "exceeded" }
    )
}

fn sparse_summary(doc: &SparseInstanceDoc) -> (String, serde_json::Value) {
    let mut table = format!(
        "sparse instance ({:?}): M = {}, N = {}, k = {}, ell = {}\n",
        doc.params.kind, doc.dimension, doc.num_columns, doc.sparsity, doc.params.ell
    );
    table += &coherence_line("gadget", &doc.coherence.gadget);
    table += &coherence_line("full", &doc.coherence.full);
    for w in &doc.warnings {
        let _ = writeln!(table, "warning: {w}");
    }
    let rec = serde_json::json!({
        "kind": doc.kind,
        "dimension": doc.dimension,
        "num_columns": doc.num_columns,
        "sparsity": doc.sparsity,
        "coherence": doc.coherence,
        "warnings": doc.warnings,
    });
    (table, rec)
}

fn write_base(cli: &Cli, base: &BaseInstance, spec: Option<ReductionSpec>) -> CliResult<Outcome> {
    match spec {
        None => {
            let doc = base.to_doc();
            emit(cli, &doc, || label_cover_summary(&doc))
        }
        Some(spec) => {
            let (inst, reference) = spec.apply(base, &limits(cli))?;
            let doc = SparseInstanceDoc::new(&inst, reference, Some(base.source.clone()));
            emit(cli, &doc, || sparse_summary(&doc))
        }
    }
}

pub fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> CliResult<Outcome> {
    let spec = generator_spec(args)?;
    let base = spec.build(cli.seed, &limits(cli))?;
    let reduction = reduction_spec(&args.reduction);
    if let Some(r) = &reduction {
        r.validate(&base.instance)?;
    }
    write_base(cli, &base, reduction)
}

pub fn cmd_reduce(cli: &Cli, args: &ReduceArgs) -> CliResult<Outcome> {
    let spec = reduction_spec(&args.reduction).ok_or_else(|| invalid("reduce needs --reduction"))?;
    let Document::LabelCover(doc) = read_document(&args.input)? else {
        return Err(invalid(format!("{} is not a Label Cover instance", args.input.display())));
    };
    let base = BaseInstance::from_doc(&doc, &args.input)?;
    write_base(cli, &base, Some(spec))
}

fn solve_config(cli: &Cli, args: &SolveArgs) -> ExperimentConfig {
    ExperimentConfig {
        source: Source::File { path: args.input.display().to_string() },
        reduction: reduction_spec(&args.reduction),
        solvers: args.solvers.clone(),
        sparsity: args.sparsity,
        cap_supports: cli.cap_supports,
        cap_dim: cli.cap_dim,
        prune: !args.no_prune,
        seed: cli.seed,
    }
}

fn render_report(cli: &Cli, report: &GapReport) -> String {
    match cli.format {
        OutputFormat::Table => render_table(report),
        OutputFormat::Record => record(report),
    }
}

pub fn cmd_solve(cli: &Cli, args: &SolveArgs) -> CliResult<Outcome> {
    let report = run_experiment(&solve_config(cli, args))?;
    if let Some(path) = &cli.out {
        write_atomic(path, &to_pretty(&report))?;
    }
    Ok(Outcome::checked(render_report(cli, &report), report.all_passed()))
}

struct Listing {
    lines: Vec<(bool, String)>,
}

impl Listing {
    fn new() -> Self {
        Listing { lines: Vec::new() }
    }

    fn push(&mut self, passed: bool, line: impl Into<String>) {
        self.lines.push((passed, line.into()));
    }

    fn finish(self, cli: &Cli, target: &str) -> Outcome {
        let passed = self.lines.iter().all(|(p, _)| *p);
        let text = match cli.format {
            OutputFormat::Table => {
                let mut s = String::new();
                for (p, line) in &self.lines {
                    let _ = writeln!(s, "[{}] {line}", if *p { "pass" } else { "FAIL" });
                }
                let _ = writeln!(s, "{target}: {}", if passed { "all checks passed" } else { "checks failed" });
                s
            }
            OutputFormat::Record => record(&serde_json::json!({
                "target": target,
                "passed": passed,
                "checks": self.lines.iter().map(|(p, l)| serde_json::json!({"passed": p, "detail": l})).collect::<Vec<_>>(),
            })),
        };
        Outcome::checked(text, passed)
    }
}

fn same_coherence(stored: &CoherenceDoc, fresh: &CoherenceDoc) -> bool {
    stored.mu_squared == fresh.mu_squared
        && stored.witness == fresh.witness
        && stored.bound_claimed == fresh.bound_claimed
        && stored.bound_satisfied == fresh.bound_satisfied
}

fn verify_instance(cli: &Cli, path: &Path) -> CliResult<Outcome> {
    let mut out = Listing::new();
    match read_document(path)? {
        Document::LabelCover(doc) => {
            let l = doc.instance()?;
            out.push(true, format!("well-formed {:?} instance with {} edges", doc.flavor, l.edges().len()));
            let reg = l.regularity();
            out.push(true, format!("left degree {:?}, right degree {:?}", reg.left_degree, reg.right_degree));
            let s = smoothness(&l);
            out.push(true, format!("smoothness {}", crate::format::Rational::from(s.value)));
            if let Some((kind, a)) = doc.reference_assignment()? {
                let value = sparsehard::label_cover::evaluate(&l, &a)?;
                let expected = match kind {
                    ReferenceKind::Perfect => sparsehard::exact::exact(1, 1),
                    ReferenceKind::ZeroSatisfying => sparsehard::exact::exact(0, 1),
                };
                out.push(value == expected, format!("reference assignment satisfies {value} of the edges"));
            }
        }
        Document::SparseInstance(doc) => {
            let inst = doc.instance()?;
            let violations = inst.check_invariants();
            if violations.is_empty() {
                out.push(true, "structural invariants hold");
            }
            for v in &violations {
                out.push(false, v.to_string());
            }
            let fresh = CoherencePair::measure(&inst);
            for (name, stored, fresh) in
                [("gadget", &doc.coherence.gadget, &fresh.gadget), ("full", &doc.coherence.full, &fresh.full)]
            {
                out.push(
                    same_coherence(stored, fresh),
                    format!("stored {name} coherence matches recomputation (mu^2 = {})", fresh.mu_squared),
                );
            }
            let gadget = coherence(&inst, CoherenceScope::Gadget);
            out.push(
                gadget.bound_satisfied,
                format!("gadget coherence {:.6} within bound {}", gadget.mu, crate::format::Rational::from(gadget.bound_claimed)),
            );
            if let Some(r) = &doc.reference {
                let cov = sparsehard::reduction::coverage_fraction(&inst, &r.support)?;
                let ok = r.kind != ReferenceKind::Perfect || cov == sparsehard::exact::exact(1, 1);
                out.push(ok, format!("reference support covers {} of the coordinates", crate::format::Rational::from(cov)));
            }
        }
        Document::GapReport(_) => return Err(invalid("use `verify report` for gap reports")),
    }
    Ok(out.finish(cli, &path.display().to_string()))
}

pub fn cmd_verify(cli: &Cli, target: &VerifyTarget) -> CliResult<Outcome> {
    let limits = limits(cli);
    match target {
        VerifyTarget::System { ell, d } => {
            let sys = build_incoherent_vector_system(*ell, *d, &limits)?;
            let report = verify_system(&sys);
            let mut out = Listing::new();
            for c in &report.checks {
                let mut line = c.property.to_string();
                if let Some(((s1, m1), (s2, m2))) = c.pair {
                    let _ = write!(line, " at ({s1},{m1}) vs ({s2},{m2})");
                }
                if let Some(d) = &c.detail {
                    let _ = write!(line, ": {d}");
                }
                out.push(c.passed, line);
            }
            Ok(out.finish(cli, &format!("V({ell},{d})")))
        }
        VerifyTarget::Hadamard { m } => {
            let code = build_hadamard_code_set(*m, &limits)?;
            let mut out = Listing::new();
            for c in verify_code_set(&code)? {
                let mut line = c.name.to_string();
                if let Some((i, j)) = c.pair {
                    let _ = write!(line, " at codewords {i}, {j}");
                }
                if let Some(d) = &c.detail {
                    let _ = write!(line, ": {d}");
                }
                out.push(c.passed, line);
            }
            Ok(out.finish(cli, &format!("Hadamard code set of order {}", code.order())))
        }
        VerifyTarget::Instance { path } => verify_instance(cli, path),
        VerifyTarget::Report { path } => {
            let Document::GapReport(stored) = read_document(path)? else {
                return Err(invalid(format!("{} is not a gap report", path.display())));
            };
            let fresh = run_experiment(&stored.config)?;
            let mut out = Listing::new();
            out.push(to_pretty(&fresh) == to_pretty(&*stored), "recomputed report is identical to the stored one");
            out.push(stored.all_passed(), "stored report checks all passed");
            Ok(out.finish(cli, &path.display().to_string()))
        }
    }
}

#[derive(Serialize)]
struct BenchRow {
    experiment: String,
    seed: u64,
    dimension: usize,
    columns: usize,
    sparsity: usize,
    mu_gadget: f64,
    reference: Option<f64>,
    omp: Option<f64>,
    ols: Option<f64>,
    oracle: Option<f64>,
    passed: bool,
}

fn bench_suite() -> Vec<(&'static str, GeneratorSpec, ReductionSpec)> {
    let two = ReductionSpec { kind: ReductionKindDoc::TwoLayered, ell: None, t_declared: None };
    let layered = |kind, ell| ReductionSpec { kind, ell: Some(ell), t_declared: None };
    vec![
        (
            "two-layered planted",
            GeneratorSpec::PlantedProjection { num_v: 3, num_w: 3, sigma_v: 3, sigma_w: 2, degree: 1 },
            two,
        ),
        ("two-layered anti-satisfiable", GeneratorSpec::AntiSatisfiable { labels: 3, cycle: 2 }, two),
        (
            "smooth planted",
            GeneratorSpec::PlantedProjection { num_v: 2, num_w: 2, sigma_v: 3, sigma_w: 2, degree: 1 },
            layered(ReductionKindDoc::Smooth, 4),
        ),
        (
            "unique planted",
            GeneratorSpec::PlantedUnique { num_v: 2, num_w: 2, labels: 2, degree: 1 },
            layered(ReductionKindDoc::Unique, 2),
        ),
        (
            "unique zero-satisfied",
            GeneratorSpec::AntiSatisfiable { labels: 3, cycle: 2 },
            layered(ReductionKindDoc::Unique, 4),
        ),
    ]
}

pub fn cmd_bench(cli: &Cli, args: &BenchArgs) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    let mut times = Vec::new();
    for (name, spec, reduction) in bench_suite() {
        for seed in cli.seed..cli.seed.saturating_add(args.trials) {
            let mut config = ExperimentConfig {
                source: Source::Generator { spec: spec.clone() },
                reduction: Some(reduction),
                solvers: vec![SolverKind::Omp, SolverKind::Ols],
                sparsity: None,
                cap_supports: cli.cap_supports,
                cap_dim: cli.cap_dim,
                prune: true,
                seed,
            };
            let (inst, reference) = config.sparse_instance()?;
            if binomial(inst.num_columns(), inst.sparsity()).is_some_and(|c| c <= cli.cap_supports.into()) {
                config.solvers.push(SolverKind::Oracle);
            }
            let start = Instant::now();
            let report = crate::report::gap_report(&config, &inst, reference.as_ref())?;
            times.push(start.elapsed());
            let normalized = |s| report.row(s).map(|r| r.normalized);
            rows.push(BenchRow {
                experiment: name.into(),
                seed,
                dimension: report.instance.dimension,
                columns: report.instance.columns,
                sparsity: report.sparsity,
                mu_gadget: report.instance.mu_gadget,
                reference: report.reference.as_ref().map(|r| r.normalized),
                omp: normalized(SolverKind::Omp),
                ols: normalized(SolverKind::Ols),
                oracle: normalized(SolverKind::Oracle),
                passed: report.all_passed(),
            });
        }
    }
    let passed = rows.iter().all(|r| r.passed);
    let text = match cli.format {
        OutputFormat::Record => rows.iter().map(record).collect(),
        OutputFormat::Table => {
            let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
            let mut s = format!(
                "{:<30} {:>4} {:>5} {:>5} {:>3} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9}  ok\n",
                "experiment", "seed", "M", "N", "k", "mu", "ref", "omp", "ols", "oracle", "ms"
            );
            for (r, t) in rows.iter().zip(&times) {
                let _ = writeln!(
                    s,
                    "{:<30} {:>4} {:>5} {:>5} {:>3} {:>8.4} {:>8} {:>8} {:>8} {:>8} {:>9.1}  {}",
                    r.experiment,
                    r.seed,
                    r.dimension,
                    r.columns,
                    r.sparsity,
                    r.mu_gadget,
                    opt(r.reference),
                    opt(r.omp),
                    opt(r.ols),
                    opt(r.oracle),
                    t.as_secs_f64() * 1e3,
                    if r.passed { "yes" } else { "NO" }
                );
            }
            s
        }
    };
    Ok(Outcome::checked(text, passed))
}
