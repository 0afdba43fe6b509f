//! On-disk documents. Every file is a JSON object with `format_version` and
//! `kind` fields; supports are sorted index arrays and exact values are
//! `{num, den}` pairs. Dense matrices are never written.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sparsehard::exact::exact;
use sparsehard::label_cover::{Assignment, Edge, Flavor, LabelCoverInstance};
use sparsehard::reduction::{
    coherence, CoherenceReport, CoherenceScope, ColumnOrigin, ReductionKind, ReductionParams, SparseInstance,
    SupportColumn,
};
use sparsehard::{Exact, ScaledIndicator};

use crate::error::{invalid, CliError, CliResult};
use crate::report::GapReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl From<Exact> for Rational {
    fn from(x: Exact) -> Self {
        let num = i64::try_from(*x.numer()).expect("rational numerator fits in 64 bits");
        let den = i64::try_from(*x.denom()).expect("rational denominator fits in 64 bits");
        Rational { num, den }
    }
}

impl TryFrom<Rational> for Exact {
    type Error = CliError;

    fn try_from(r: Rational) -> CliResult<Exact> {
        if r.den == 0 {
            return Err(invalid("rational with zero denominator"));
        }
        Ok(exact(r.num.into(), r.den.into()))
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlavorDoc {
    Projection,
    Unique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub v: usize,
    pub w: usize,
    pub map: Vec<usize>,
}

/// What a stored reference assignment is known to achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Satisfies every constraint.
    Perfect,
    /// Satisfies no constraint.
    ZeroSatisfying,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceDoc {
    pub kind: ReferenceKind,
    pub v: Vec<usize>,
    pub w: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelCoverDoc {
    pub format_version: u32,
    pub kind: String,
    pub flavor: FlavorDoc,
    pub num_v: usize,
    pub num_w: usize,
    pub sigma_v: usize,
    pub sigma_w: usize,
    pub num_edges: usize,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_soundness: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceDoc>,
    /// Free-form description of where the instance came from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

pub const LABEL_COVER: &str = "label_cover";
pub const SPARSE_INSTANCE: &str = "sparse_instance";
pub const GAP_REPORT: &str = "gap_report";

impl LabelCoverDoc {
    pub fn new(l: &LabelCoverInstance, reference: Option<ReferenceDoc>, source: Option<String>) -> Self {
        LabelCoverDoc {
            format_version: FORMAT_VERSION,
            kind: LABEL_COVER.into(),
            flavor: match l.flavor() {
                Flavor::Projection => FlavorDoc::Projection,
                Flavor::Unique => FlavorDoc::Unique,
            },
            num_v: l.num_v(),
            num_w: l.num_w(),
            sigma_v: l.sigma_v(),
            sigma_w: l.sigma_w(),
            num_edges: l.edges().len(),
            edges: l.edges().iter().map(|e| EdgeDoc { v: e.v, w: e.w, map: e.map.clone() }).collect(),
            declared_soundness: l.declared_soundness().map(Rational::from),
            reference,
            source,
        }
    }

    pub fn instance(&self) -> CliResult<LabelCoverInstance> {
        if self.num_edges != self.edges.len() {
            return Err(invalid(format!("num_edges = {} but {} edges listed", self.num_edges, self.edges.len())));
        }
        let flavor = match self.flavor {
            FlavorDoc::Projection => Flavor::Projection,
            FlavorDoc::Unique => Flavor::Unique,
        };
        let edges = self.edges.iter().map(|e| Edge::new(e.v, e.w, e.map.clone())).collect();
        let mut l = LabelCoverInstance::new(self.num_v, self.num_w, self.sigma_v, self.sigma_w, edges, flavor)?;
        if let Some(s) = self.declared_soundness {
            l = l.with_declared_soundness(s.try_into()?);
        }
        Ok(l)
    }

    pub fn reference_assignment(&self) -> CliResult<Option<(ReferenceKind, Assignment)>> {
        let Some(r) = &self.reference else { return Ok(None) };
        let a = Assignment::two_layered(r.v.clone(), r.w.clone());
        a.validate(&[self.num_v, self.num_w], &[self.sigma_v, self.sigma_w])?;
        Ok(Some((r.kind, a)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "kebab-case")]
pub enum ReductionKindDoc {
    TwoLayered,
    Smooth,
    Unique,
}

impl From<ReductionKind> for ReductionKindDoc {
    fn from(k: ReductionKind) -> Self {
        match k {
            ReductionKind::TwoLayered => ReductionKindDoc::TwoLayered,
            ReductionKind::MultilayeredSmooth => ReductionKindDoc::Smooth,
            ReductionKind::MultilayeredUnique => ReductionKindDoc::Unique,
        }
    }
}

impl From<ReductionKindDoc> for ReductionKind {
    fn from(k: ReductionKindDoc) -> Self {
        match k {
            ReductionKindDoc::TwoLayered => ReductionKind::TwoLayered,
            ReductionKindDoc::Smooth => ReductionKind::MultilayeredSmooth,
            ReductionKindDoc::Unique => ReductionKind::MultilayeredUnique,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub kind: ReductionKindDoc,
    pub ell: usize,
    pub label_sets: usize,
    pub block_width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hadamard_exponent: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_declared: Option<u64>,
    pub smoothness: Rational,
    pub num_v: usize,
    pub num_w: usize,
    pub sigma_v: usize,
    pub sigma_w: usize,
    pub num_edges: usize,
}

impl From<&ReductionParams> for ParamsDoc {
    fn from(p: &ReductionParams) -> Self {
        ParamsDoc {
            kind: p.kind.into(),
            ell: p.ell,
            label_sets: p.label_sets,
            block_width: p.block_width,
            hadamard_exponent: p.hadamard_exponent,
            t_declared: p.t_declared,
            smoothness: p.smoothness.into(),
            num_v: p.num_v,
            num_w: p.num_w,
            sigma_v: p.sigma_v,
            sigma_w: p.sigma_w,
            num_edges: p.num_edges,
        }
    }
}

impl TryFrom<&ParamsDoc> for ReductionParams {
    type Error = CliError;

    fn try_from(p: &ParamsDoc) -> CliResult<Self> {
        Ok(ReductionParams {
            kind: p.kind.into(),
            ell: p.ell,
            label_sets: p.label_sets,
            block_width: p.block_width,
            hadamard_exponent: p.hadamard_exponent,
            t_declared: p.t_declared,
            smoothness: p.smoothness.try_into()?,
            num_v: p.num_v,
            num_w: p.num_w,
            sigma_v: p.sigma_v,
            sigma_w: p.sigma_w,
            num_edges: p.num_edges,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginDoc {
    Label { layer: usize, vertex: usize, label: usize },
    Identity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnDoc {
    pub origin: OriginDoc,
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceDoc {
    pub mu: f64,
    pub mu_squared: Rational,
    pub witness: Option<[usize; 2]>,
    pub bound_claimed: Rational,
    pub bound_satisfied: bool,
}

impl From<&CoherenceReport> for CoherenceDoc {
    fn from(r: &CoherenceReport) -> Self {
        CoherenceDoc {
            mu: r.mu,
            mu_squared: r.mu_squared.into(),
            witness: r.witness.map(|(i, j)| [i, j]),
            bound_claimed: r.bound_claimed.into(),
            bound_satisfied: r.bound_satisfied,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherencePair {
    pub gadget: CoherenceDoc,
    pub full: CoherenceDoc,
}

impl CoherencePair {
    pub fn measure(inst: &SparseInstance) -> Self {
        CoherencePair {
            gadget: (&coherence(inst, CoherenceScope::Gadget)).into(),
            full: (&coherence(inst, CoherenceScope::Full)).into(),
        }
    }
}

/// A support derived from a reference assignment of the source instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSupport {
    pub kind: ReferenceKind,
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseInstanceDoc {
    pub format_version: u32,
    pub kind: String,
    pub dimension: usize,
    pub sparsity: usize,
    pub num_columns: usize,
    pub params: ParamsDoc,
    pub layer_sizes: Vec<usize>,
    pub layer_alphabets: Vec<usize>,
    pub blocks: Vec<[usize; 2]>,
    pub coherence: CoherencePair,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSupport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub columns: Vec<ColumnDoc>,
}

impl SparseInstanceDoc {
    pub fn new(inst: &SparseInstance, reference: Option<ReferenceSupport>, source: Option<String>) -> Self {
        SparseInstanceDoc {
            format_version: FORMAT_VERSION,
            kind: SPARSE_INSTANCE.into(),
            dimension: inst.dimension(),
            sparsity: inst.sparsity(),
            num_columns: inst.num_columns(),
            params: inst.params().into(),
            layer_sizes: inst.layer_sizes().to_vec(),
            layer_alphabets: inst.layer_alphabets().to_vec(),
            blocks: inst.blocks().iter().map(|r| [r.start, r.end]).collect(),
            coherence: CoherencePair::measure(inst),
            warnings: inst.warnings().to_vec(),
            reference,
            source,
            columns: inst
                .columns()
                .iter()
                .zip(inst.origins())
                .map(|(c, o)| ColumnDoc {
                    origin: match *o {
                        ColumnOrigin::Label { layer, vertex, label } => OriginDoc::Label { layer, vertex, label },
                        ColumnOrigin::Identity(x) => OriginDoc::Identity(x),
                    },
                    support: c.support().to_vec(),
                })
                .collect(),
        }
    }

    pub fn instance(&self) -> CliResult<SparseInstance> {
        if self.num_columns != self.columns.len() {
            return Err(invalid(format!(
                "num_columns = {} but {} columns listed",
                self.num_columns,
                self.columns.len()
            )));
        }
        let mut columns = Vec::with_capacity(self.columns.len());
        let mut origins = Vec::with_capacity(self.columns.len());
        for (i, c) in self.columns.iter().enumerate() {
            let col = SupportColumn::new(self.dimension, c.support.clone())
                .map_err(|e| invalid(format!("column {i}: {e}")))?;
            columns.push(col);
            origins.push(match c.origin {
                OriginDoc::Label { layer, vertex, label } => ColumnOrigin::Label { layer, vertex, label },
                OriginDoc::Identity(x) => ColumnOrigin::Identity(x),
            });
        }
        for &[start, end] in &self.blocks {
            if start > end || end > self.dimension {
                return Err(invalid(format!("block [{start}, {end}) lies outside dimension {}", self.dimension)));
            }
        }
        let inst = SparseInstance::from_parts(
            self.dimension,
            columns,
            origins,
            self.sparsity,
            self.blocks.iter().map(|&[s, e]| s..e).collect(),
            self.layer_sizes.clone(),
            self.layer_alphabets.clone(),
            (&self.params).try_into()?,
        )?;
        if let Some(r) = &self.reference {
            if let Some(&bad) = r.support.iter().find(|&&c| c >= inst.num_columns()) {
                return Err(invalid(format!("reference support names missing column {bad}")));
            }
        }
        Ok(inst)
    }
}

/// Any file this tool reads.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    LabelCover(LabelCoverDoc),
    SparseInstance(SparseInstanceDoc),
    GapReport(Box<GapReport>),
}

pub fn parse_document(text: &str, path: &Path) -> CliResult<Document> {
    let json = |source| CliError::Json { path: path.to_path_buf(), source };
    let value: Value = serde_json::from_str(text).map_err(json)?;
    let version = value.get("format_version").and_then(Value::as_u64);
    if version != Some(FORMAT_VERSION.into()) {
        return Err(invalid(format!(
            "{}: unsupported format_version {version:?}, expected {FORMAT_VERSION}",
            path.display()
        )));
    }
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or_default().to_owned();
    match kind.as_str() {
        LABEL_COVER => Ok(Document::LabelCover(serde_json::from_value(value).map_err(json)?)),
        SPARSE_INSTANCE => Ok(Document::SparseInstance(serde_json::from_value(value).map_err(json)?)),
        GAP_REPORT => Ok(Document::GapReport(Box::new(serde_json::from_value(value).map_err(json)?))),
        other => Err(invalid(format!("{}: unknown document kind {other:?}", path.display()))),
    }
}

pub fn read_document(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_document(&text, path)
}

pub fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

