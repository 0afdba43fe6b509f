//! Experiment configuration and the generate → reduce pipeline behind it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sparsehard::label_cover::{
    generate, max3sat_to_label_cover, parallel_repetition, Assignment, GeneratorKind, LabelCoverInstance, Literal,
    Max3SatFormula,
};
use sparsehard::reduction::{
    assignment_to_support, reduce_multilayered_smooth, reduce_multilayered_unique, reduce_two_layered, SparseInstance,
};
use sparsehard::vector_systems::HadamardCodeSet;
use sparsehard::Limits;

use crate::error::{invalid, CliError, CliResult};
use crate::format::{
    read_document, Document, LabelCoverDoc, ReductionKindDoc, ReferenceDoc, ReferenceKind, ReferenceSupport,
};

/// Environment variable holding the memory ceiling in MiB.
pub const CAP_MB_VAR: &str = "SPARSEHARD_CAP_MB";

/// Families of base Label Cover instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    PlantedProjection { num_v: usize, num_w: usize, sigma_v: usize, sigma_w: usize, degree: usize },
    PlantedUnique { num_v: usize, num_w: usize, labels: usize, degree: usize },
    RandomUnique { num_v: usize, num_w: usize, labels: usize, degree: usize },
    AntiSatisfiable { labels: usize, cycle: usize },
    /// Clause-variable game of an explicit formula; literals are signed, 1-based variables.
    Formula { clauses: Vec<[i64; 3]>, repeat: usize },
    /// Clause-variable game of a seeded formula where every variable occurs five times.
    RandomFormula { vars: usize, repeat: usize },
}

/// Parses `"1,-2,3;2,3,-4"` into clauses of signed literals.
pub fn parse_clauses(text: &str) -> CliResult<Vec<[i64; 3]>> {
    text.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|clause| {
            let lits: Vec<i64> = clause
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| invalid(format!("bad literal {t:?}"))))
                .collect::<CliResult<_>>()?;
            <[i64; 3]>::try_from(lits).map_err(|l| invalid(format!("clause {l:?} needs exactly three literals")))
        })
        .collect()
}

fn formula_from_clauses(clauses: &[[i64; 3]]) -> CliResult<Max3SatFormula> {
    if clauses.is_empty() {
        return Err(invalid("formula has no clauses"));
    }
    let mut num_vars = 0;
    let mut out = Vec::with_capacity(clauses.len());
    for clause in clauses {
        let mut lits = [Literal::pos(0); 3];
        for (slot, &lit) in lits.iter_mut().zip(clause) {
            if lit == 0 {
                return Err(invalid("literal 0 is not allowed; variables are numbered from 1"));
            }
            let var = lit.unsigned_abs() as usize - 1;
            num_vars = num_vars.max(var + 1);
            *slot = Literal { var, negated: lit < 0 };
        }
        out.push(lits);
    }
    Ok(Max3SatFormula::new(num_vars, out)?)
}

/// A base instance plus a reference assignment when one is known.
pub struct BaseInstance {
    pub instance: LabelCoverInstance,
    pub reference: Option<(ReferenceKind, Assignment)>,
    pub source: String,
}

impl GeneratorSpec {
    pub fn build(&self, seed: u64, limits: &Limits) -> CliResult<BaseInstance> {
        let planted = |kind: GeneratorKind, reference: ReferenceKind| -> CliResult<BaseInstance> {
            let g = generate(&kind, seed)?;
            Ok(BaseInstance {
                instance: g.instance,
                reference: g.reference.map(|a| (reference, a)),
                source: format!("{} seed {seed}", self.describe()),
            })
        };
        match *self {
            GeneratorSpec::PlantedProjection { num_v, num_w, sigma_v, sigma_w, degree } => planted(
                GeneratorKind::PlantedProjection { num_v, num_w, sigma_v, sigma_w, left_degree: degree },
                ReferenceKind::Perfect,
            ),
            GeneratorSpec::PlantedUnique { num_v, num_w, labels, degree } => planted(
                GeneratorKind::PlantedUnique { num_v, num_w, labels, left_degree: degree },
                ReferenceKind::Perfect,
            ),
            GeneratorSpec::RandomUnique { num_v, num_w, labels, degree } => {
                planted(GeneratorKind::RandomUnique { num_v, num_w, labels, left_degree: degree }, ReferenceKind::Perfect)
            }
            GeneratorSpec::AntiSatisfiable { labels, cycle } => {
                planted(GeneratorKind::AntiSatisfiableUnique { labels, cycle }, ReferenceKind::ZeroSatisfying)
            }
            GeneratorSpec::Formula { ref clauses, repeat } => {
                let f = formula_from_clauses(clauses)?;
                self.game(&f, repeat, limits, format!("{} clauses", clauses.len()))
            }
            GeneratorSpec::RandomFormula { vars, repeat } => {
                let f = Max3SatFormula::random_five_occurrence(vars, seed)?;
                self.game(&f, repeat, limits, format!("seed {seed}"))
            }
        }
    }

    fn game(&self, f: &Max3SatFormula, repeat: usize, limits: &Limits, detail: String) -> CliResult<BaseInstance> {
        let base = max3sat_to_label_cover(f)?;
        let instance = if repeat == 1 { base } else { parallel_repetition(&base, repeat, limits)? };
        Ok(BaseInstance { instance, reference: None, source: format!("{} {detail}", self.describe()) })
    }

    pub fn describe(&self) -> String {
        match self {
            GeneratorSpec::PlantedProjection { .. } => "planted projection".into(),
            GeneratorSpec::PlantedUnique { .. } => "planted unique".into(),
            GeneratorSpec::RandomUnique { .. } => "random unique".into(),
            GeneratorSpec::AntiSatisfiable { .. } => "anti-satisfiable cycle".into(),
            GeneratorSpec::Formula { repeat, .. } => format!("clause-variable game u={repeat}"),
            GeneratorSpec::RandomFormula { repeat, .. } => format!("five-occurrence clause-variable game u={repeat}"),
        }
    }
}

impl BaseInstance {
    pub fn to_doc(&self) -> LabelCoverDoc {
        let reference = self.reference.as_ref().map(|(kind, a)| ReferenceDoc {
            kind: *kind,
            v: a.layer(0).to_vec(),
            w: a.layer(1).to_vec(),
        });
        LabelCoverDoc::new(&self.instance, reference, Some(self.source.clone()))
    }

    pub fn from_doc(doc: &LabelCoverDoc, path: &Path) -> CliResult<Self> {
        Ok(BaseInstance {
            instance: doc.instance()?,
            reference: doc.reference_assignment()?,
            source: doc.source.clone().unwrap_or_else(|| path.display().to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSpec {
    pub kind: ReductionKindDoc,
    /// Number of layers; ignored by the two-layered reduction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_declared: Option<u64>,
}

impl ReductionSpec {
    fn layers(&self) -> CliResult<usize> {
        match (self.kind, self.ell) {
            (ReductionKindDoc::TwoLayered, _) => Ok(2),
            (_, Some(ell)) if ell >= 2 && ell % 2 == 0 => Ok(ell),
            (_, Some(ell)) => Err(invalid(format!("ℓ must be even and at least 2, got {ell}"))),
            (_, None) => Err(invalid("layered reductions need --ell")),
        }
    }

    /// Checks parameters against the base instance before any allocation.
    pub fn validate(&self, l: &LabelCoverInstance) -> CliResult<()> {
        let ell = self.layers()?;
        if self.kind != ReductionKindDoc::TwoLayered && l.sigma_w() > ell {
            return Err(invalid(format!("d = {} label sets exceed ℓ = {ell}", l.sigma_w())));
        }
        Ok(())
    }

    /// Block width of the reduced instance, saturating on overflow.
    pub fn block_width(&self, l: &LabelCoverInstance) -> CliResult<u128> {
        let ell = self.layers()?;
        Ok(match self.kind {
            ReductionKindDoc::TwoLayered => 1u128 << HadamardCodeSet::exponent_for(l.sigma_w()).min(127),
            _ => (ell as u128).saturating_pow(l.sigma_w() as u32),
        })
    }

    pub fn apply(&self, base: &BaseInstance, limits: &Limits) -> CliResult<(SparseInstance, Option<ReferenceSupport>)> {
        self.validate(&base.instance)?;
        let ell = self.layers()?;
        let width = self.block_width(&base.instance)?;
        let dimension = width.saturating_mul(base.instance.edges().len() as u128);
        let alphabet_sum = match self.kind {
            ReductionKindDoc::TwoLayered => base.instance.sigma_v() + base.instance.sigma_w(),
            _ => (base.instance.sigma_v() + base.instance.sigma_w()) * ell / 2,
        } as u128;
        // Each coordinate is hit by roughly Σ alphabets / ℓ gadget columns, plus identity.
        check_memory(dimension.saturating_mul(8).saturating_mul(alphabet_sum / ell as u128 + 2))?;

        let l = &base.instance;
        let inst = match self.kind {
            ReductionKindDoc::TwoLayered => reduce_two_layered(&l.as_projection(), self.t_declared, limits)?,
            ReductionKindDoc::Smooth => reduce_multilayered_smooth(&l.as_projection(), ell, limits)?,
            ReductionKindDoc::Unique => reduce_multilayered_unique(l, ell, limits)?,
        };
        let reference = match &base.reference {
            Some((kind, a)) => {
                let a = if ell == 2 { a.clone() } else { a.repeat_layers(ell)? };
                Some(ReferenceSupport { kind: *kind, support: assignment_to_support(&inst, &a)? })
            }
            None => None,
        };
        Ok((inst, reference))
    }
}

/// Where the base or sparse instance comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Source {
    Generator { spec: GeneratorSpec },
    File { path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Omp,
    Ols,
    Oracle,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Omp => "omp",
            SolverKind::Ols => "ols",
            SolverKind::Oracle => "oracle",
        })
    }
}

/// Everything needed to reproduce a gap report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: Source,
    /// Required when the source is a Label Cover instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSpec>,
    pub solvers: Vec<SolverKind>,
    /// Overrides the instance sparsity `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<usize>,
    pub cap_supports: u64,
    pub cap_dim: u64,
    pub prune: bool,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn limits(&self) -> Limits {
        Limits::default()
            .with_max_dimension(usize::try_from(self.cap_dim).unwrap_or(usize::MAX))
            .with_max_search(self.cap_supports.into())
    }

    /// The sparse instance the experiment runs on, with its reference support.
    pub fn sparse_instance(&self) -> CliResult<(SparseInstance, Option<ReferenceSupport>)> {
        let limits = self.limits();
        let base = match &self.source {
            Source::Generator { spec } => spec.build(self.seed, &limits)?,
            Source::File { path } => {
                let path = Path::new(path);
                match read_document(path)? {
                    Document::SparseInstance(doc) => {
                        if self.reduction.is_some() {
                            return Err(invalid("source is already a sparse instance; drop --reduction"));
                        }
                        let inst = doc.instance()?;
                        return Ok((inst, doc.reference));
                    }
                    Document::LabelCover(doc) => BaseInstance::from_doc(&doc, path)?,
                    Document::GapReport(_) => return Err(invalid("a gap report is not an instance")),
                }
            }
        };
        let spec = self.reduction.ok_or_else(|| invalid("Label Cover source needs a reduction"))?;
        spec.apply(&base, &limits)
    }
}

/// Refuses work whose estimated footprint exceeds `SPARSEHARD_CAP_MB`.
pub fn check_memory(bytes: u128) -> CliResult<()> {
    let Ok(raw) = std::env::var(CAP_MB_VAR) else { return Ok(()) };
    let cap_mb: u64 = raw
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{CAP_MB_VAR} must be a whole number of MiB, got {raw:?}")))?;
    let required_mb = bytes.div_ceil(1 << 20);
    if required_mb > cap_mb.into() {
        return Err(CliError::Memory { required_mb: u64::try_from(required_mb).unwrap_or(u64::MAX), cap_mb });
    }
    Ok(())
}
