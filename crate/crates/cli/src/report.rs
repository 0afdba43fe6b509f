//! Gap reports: residuals of every requested solver, normalized by `√M`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sparsehard::exact::exact;
use sparsehard::reduction::{coverage_fraction, SparseInstance};
use sparsehard::solvers::{
    brute_force_sparse, ols, omp, restricted_least_squares, restricted_nonnegative_least_squares, BruteForceOptions, Dictionary, PursuitOptions,
    SolverResult, DECISION_TOLERANCE, ZERO_RESIDUAL,
};

use crate::config::{check_memory, ExperimentConfig, SolverKind};
use crate::error::CliResult;
use crate::format::{CoherencePair, Rational, ReductionKindDoc, ReferenceKind, ReferenceSupport, FORMAT_VERSION, GAP_REPORT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub reduction: ReductionKindDoc,
    pub dimension: usize,
    pub columns: usize,
    pub gadget_columns: usize,
    pub sparsity: usize,
    pub ell: usize,
    pub label_sets: usize,
    pub block_width: usize,
    pub smoothness: Rational,
    pub gadget_bound: Rational,
    pub mu_gadget: f64,
    pub mu_gadget_squared: Rational,
    pub mu_full: f64,
    pub mu_full_squared: Rational,
    /// `log k / log ℓ`.
    pub sparsity_exponent: f64,
    pub fingerprint: u64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRow {
    pub solver: SolverKind,
    pub support: Vec<usize>,
    pub residual: f64,
    /// `residual / √M`.
    pub normalized: f64,
    pub coverage: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub kind: ReferenceKind,
    pub support: Vec<usize>,
    pub residual: f64,
    pub normalized: f64,
    pub normalized_squared: f64,
    pub coverage: Rational,
    pub coverage_deficit: Rational,
    /// Residual of the best fit with nonnegative coefficients on the same support.
    pub nonnegative_residual: f64,
    /// Fraction of constraints the reference labeling leaves unsatisfied.
    pub unsatisfied: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub format_version: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub instance: InstanceSummary,
    pub sparsity: usize,
    pub solvers: Vec<SolverRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceRow>,
    pub checks: Vec<Check>,
}

impl GapReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn row(&self, solver: SolverKind) -> Option<&SolverRow> {
        self.solvers.iter().find(|r| r.solver == solver)
    }
}

fn summarize(inst: &SparseInstance, fingerprint: u64) -> InstanceSummary {
    let coherence = CoherencePair::measure(inst);
    let p = inst.params();
    InstanceSummary {
        reduction: p.kind.into(),
        dimension: inst.dimension(),
        columns: inst.num_columns(),
        gadget_columns: inst.num_gadget_columns(),
        sparsity: inst.sparsity(),
        ell: p.ell,
        label_sets: p.label_sets,
        block_width: p.block_width,
        smoothness: p.smoothness.into(),
        gadget_bound: p.gadget_bound().into(),
        mu_gadget: coherence.gadget.mu,
        mu_gadget_squared: coherence.gadget.mu_squared,
        mu_full: coherence.full.mu,
        mu_full_squared: coherence.full.mu_squared,
        sparsity_exponent: inst.sparsity_exponent(),
        fingerprint,
        warnings: inst.warnings().to_vec(),
    }
}

fn row(inst: &SparseInstance, solver: SolverKind, r: &SolverResult) -> CliResult<SolverRow> {
    let root_m = (inst.dimension() as f64).sqrt();
    Ok(SolverRow {
        solver,
        support: r.support.clone(),
        residual: r.residual_norm,
        normalized: r.residual_norm / root_m,
        coverage: coverage_fraction(inst, &r.support)?.into(),
    })
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Runs the configured solvers on an instance and assembles the report.
pub fn gap_report(
    config: &ExperimentConfig,
    inst: &SparseInstance,
    reference: Option<&ReferenceSupport>,
) -> CliResult<GapReport> {
    let m = inst.dimension() as u128;
    let n = inst.num_columns() as u128;
    // Dense dictionary plus the column copies the oracle keeps.
    check_memory(m.saturating_mul(n).saturating_mul(16))?;

    let dict = Dictionary::from_instance(inst);
    let y = inst.target();
    let k = config.sparsity.unwrap_or(inst.sparsity());
    let summary = summarize(inst, dict.fingerprint(&y));
    let root_m = (inst.dimension() as f64).sqrt();

    let mut solvers = Vec::new();
    let mut solver_kinds = config.solvers.clone();
    solver_kinds.sort();
    solver_kinds.dedup();
    for &s in &solver_kinds {
        let result = match s {
            SolverKind::Omp => omp(&dict, &y, k, &PursuitOptions::default())?,
            SolverKind::Ols => ols(&dict, &y, k, &PursuitOptions::default())?,
            SolverKind::Oracle => brute_force_sparse(
                &dict,
                &y,
                k,
                &BruteForceOptions { cap: config.cap_supports.into(), prune_indicator: config.prune },
            )?,
        };
        solvers.push(row(inst, s, &result)?);
    }

    let reference = match reference {
        Some(r) => {
            let fit = restricted_least_squares(&dict, &r.support, &y)?;
            let coverage = coverage_fraction(inst, &r.support)?;
            let normalized = fit.residual_norm / root_m;
            let nonnegative = restricted_nonnegative_least_squares(&dict, &r.support, &y)?;
            let unsatisfied = match r.kind {
                ReferenceKind::Perfect => exact(0, 1),
                ReferenceKind::ZeroSatisfying => exact(1, 1),
            };
            Some(ReferenceRow {
                kind: r.kind,
                support: r.support.clone(),
                residual: fit.residual_norm,
                normalized,
                normalized_squared: normalized * normalized,
                coverage: coverage.into(),
                coverage_deficit: (exact(1, 1) - coverage).into(),
                nonnegative_residual: nonnegative.residual_norm,
                unsatisfied: unsatisfied.into(),
            })
        }
        None => None,
    };

    let mut checks = Vec::new();
    let violations = inst.check_invariants();
    checks.push(check(
        "structure",
        violations.is_empty(),
        violations.first().map_or_else(|| "all invariants hold".into(), |v| v.to_string()),
    ));
    let coherence = CoherencePair::measure(inst);
    checks.push(check(
        "gadget coherence within bound",
        coherence.gadget.bound_satisfied,
        format!("mu^2 = {} vs bound^2 = {}", coherence.gadget.mu_squared, {
            let b = inst.params().gadget_bound();
            Rational::from(b * b)
        }),
    ));
    if let Some(r) = &reference {
        let eps: sparsehard::Exact = r.unsatisfied.try_into()?;
        let ceiling = (sparsehard::exact::to_f64(&eps) * inst.dimension() as f64).sqrt();
        checks.push(check(
            "nonnegative reference fit within sqrt(eps M)",
            r.nonnegative_residual <= ceiling + DECISION_TOLERANCE,
            format!("{:.6} vs {:.6} with eps = {}", r.nonnegative_residual, ceiling, r.unsatisfied),
        ));
        match r.kind {
            ReferenceKind::Perfect => checks.push(check(
                "completeness residual is zero",
                r.residual < ZERO_RESIDUAL && r.coverage == Rational { num: 1, den: 1 },
                format!("residual {:e}, coverage {}", r.residual, r.coverage),
            )),
            ReferenceKind::ZeroSatisfying => {
                let deficit: sparsehard::Exact = r.coverage_deficit.try_into()?;
                let floor = sparsehard::exact::to_f64(&deficit);
                checks.push(check(
                    "reference residual covers its deficit",
                    r.normalized_squared >= floor - DECISION_TOLERANCE,
                    format!("residual^2/M = {:.6} vs uncovered fraction {}", r.normalized_squared, r.coverage_deficit),
                ));
            }
        }
    }
    if let Some(oracle) = solvers.iter().find(|r| r.solver == SolverKind::Oracle) {
        for r in solvers.iter().filter(|r| r.solver != SolverKind::Oracle) {
            checks.push(check(
                &format!("oracle dominates {}", r.solver),
                oracle.residual <= r.residual + DECISION_TOLERANCE,
                format!("{:.12} vs {:.12}", oracle.residual, r.residual),
            ));
        }
    }

    Ok(GapReport {
        format_version: FORMAT_VERSION,
        kind: GAP_REPORT.into(),
        config: config.clone(),
        instance: summary,
        sparsity: k,
        solvers,
        reference,
        checks,
    })
}

/// Builds the configured instance and reports on it.
pub fn run_experiment(config: &ExperimentConfig) -> CliResult<GapReport> {
    let (inst, reference) = config.sparse_instance()?;
    gap_report(config, &inst, reference.as_ref())
}

fn fmt_support(s: &[usize]) -> String {
    const SHOWN: usize = 12;
    let mut out: Vec<String> = s.iter().take(SHOWN).map(usize::to_string).collect();
    if s.len() > SHOWN {
        out.push(format!("… +{}", s.len() - SHOWN));
    }
    format!("[{}]", out.join(", "))
}

pub fn render_table(r: &GapReport) -> String {
    let i = &r.instance;
    let mut s = String::new();
    let _ = writeln!(s, "reduction          {:?}", i.reduction);
    let _ = writeln!(s, "M x N, k           {} x {}, k = {}", i.dimension, i.columns, r.sparsity);
    let _ = writeln!(s, "ell, label sets    {}, {}", i.ell, i.label_sets);
    let _ = writeln!(s, "smoothness         {}", i.smoothness);
    let _ = writeln!(s, "mu gadget          {:.6} (mu^2 = {}, bound {})", i.mu_gadget, i.mu_gadget_squared, i.gadget_bound);
    let _ = writeln!(s, "mu full            {:.6} (mu^2 = {})", i.mu_full, i.mu_full_squared);
    let _ = writeln!(s, "log k / log ell    {:.4}", i.sparsity_exponent);
    for w in &i.warnings {
        let _ = writeln!(s, "warning            {w}");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<10} {:>14} {:>12} {:>10}  support", "solver", "residual", "resid/sqrtM", "coverage");
    if let Some(rf) = &r.reference {
        let name = match rf.kind {
            ReferenceKind::Perfect => "planted",
            ReferenceKind::ZeroSatisfying => "canonical",
        };
        let _ = writeln!(
            s,
            "{:<10} {:>14.6e} {:>12.6} {:>10}  {}",
            name,
            rf.residual,
            rf.normalized,
            rf.coverage.to_string(),
            fmt_support(&rf.support)
        );
    }
    for row in &r.solvers {
        let _ = writeln!(
            s,
            "{:<10} {:>14.6e} {:>12.6} {:>10}  {}",
            row.solver.to_string(),
            row.residual,
            row.normalized,
            row.coverage.to_string(),
            fmt_support(&row.support)
        );
    }
    let _ = writeln!(s);
    for c in &r.checks {
        let _ = writeln!(s, "[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    s
}
