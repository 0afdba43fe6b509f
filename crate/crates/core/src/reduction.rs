//! Compilation of Label Cover instances into sparse approximation instances.
//!
//! Every reduction produces a dictionary of scaled indicator columns over
//! `M = (block width) · |E|` coordinates, one contiguous block per edge (or
//! hyper-edge) in input order, and the all-ones target. Column order is
//! `(layer, vertex, label)` followed by the `M` identity columns.
//!
//! * [`reduce_two_layered`]: right vertex `w` with label `i` carries the
//!   Hadamard codeword `x_i` on every incident block; left vertex `v` with
//!   label `a` carries the complement of `x_{Π_e(a)}` on each incident block.
//! * [`reduce_multilayered_smooth`] and [`reduce_multilayered_unique`]: the
//!   vertex copy in layer `j` with label `i` carries member `j` of set `i` of
//!   the incoherent vector system `V(ℓ, d)`; left layers route their label
//!   through `Π_e` first.
//!
//! A perfect assignment selects one column per vertex copy and those columns
//! tile every block exactly.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::exact::{self, check_support, exact, Exact, ScaledIndicator};
use crate::label_cover::{multilayer, Assignment, Flavor, LabelCoverInstance};
use crate::limits::Limits;
use crate::vector_systems::{build_hadamard_code_set, build_incoherent_vector_system, complement, Codeword, HadamardCodeSet};

/// A dictionary column: a support set scaled to unit norm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportColumn {
    dimension: usize,
    support: Vec<usize>,
}

impl SupportColumn {
    pub fn new(dimension: usize, support: Vec<usize>) -> Result<Self> {
        check_support(dimension, &support)?;
        Ok(SupportColumn { dimension, support })
    }

    pub fn identity(dimension: usize, coordinate: usize) -> Result<Self> {
        SupportColumn::new(dimension, vec![coordinate])
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        let eta = self.entry_value();
        for &i in &self.support {
            out[i] = eta;
        }
        out
    }
}

impl ScaledIndicator for SupportColumn {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn support(&self) -> &[usize] {
        &self.support
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnOrigin {
    /// Column for `(vertex, label)` of a layer. Two-layered instances use layer 0 for `V`, 1 for `W`.
    Label { layer: usize, vertex: usize, label: usize },
    /// Identity column `e_j`.
    Identity(usize),
}

impl ColumnOrigin {
    pub fn is_identity(&self) -> bool {
        matches!(self, ColumnOrigin::Identity(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    /// Hadamard codewords over a two-layered projection instance.
    TwoLayered,
    /// Incoherent vector system over the `ℓ`-layered lift of a projection instance.
    MultilayeredSmooth,
    /// Incoherent vector system over the `ℓ`-layered lift of a unique instance.
    MultilayeredUnique,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::TwoLayered => "two-layered",
            ReductionKind::MultilayeredSmooth => "multilayered-smooth",
            ReductionKind::MultilayeredUnique => "multilayered-unique",
        })
    }
}

/// Parameters a reduction was run with, and what it measured on the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionParams {
    pub kind: ReductionKind,
    /// Number of layers; `2` for the two-layered reduction.
    pub ell: usize,
    /// Codewords needed per block: `|Σ_W|` (this is `d`, or `R` for unique instances).
    pub label_sets: usize,
    /// Width of one block.
    pub block_width: usize,
    /// Hadamard exponent `m` (block width `2^m`) for the two-layered reduction.
    pub hadamard_exponent: Option<u32>,
    /// Smoothness parameter `T` the caller believes the input has, if any.
    pub t_declared: Option<u64>,
    /// Smoothness measured exactly on the input.
    pub smoothness: Exact,
    pub num_v: usize,
    pub num_w: usize,
    pub sigma_v: usize,
    pub sigma_w: usize,
    pub num_edges: usize,
}

impl ReductionParams {
    /// Gadget-scope coherence bound: `1/2 + s`, `s + 1/ℓ` or `1/ℓ` by kind,
    /// where `s` is the measured smoothness.
    pub fn gadget_bound(&self) -> Exact {
        let inv_ell = exact(1, self.ell as i128);
        match self.kind {
            ReductionKind::TwoLayered => exact(1, 2) + self.smoothness,
            ReductionKind::MultilayeredSmooth => self.smoothness + inv_ell,
            ReductionKind::MultilayeredUnique => inv_ell,
        }
    }
}

/// Dictionary, sparsity and provenance produced by a reduction. The target is all ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseInstance {
    dimension: usize,
    columns: Vec<SupportColumn>,
    origins: Vec<ColumnOrigin>,
    sparsity: usize,
    blocks: Vec<Range<usize>>,
    layer_sizes: Vec<usize>,
    layer_alphabets: Vec<usize>,
    params: ReductionParams,
    warnings: Vec<String>,
}

/// A broken structural invariant found by [`SparseInstance::check_invariants`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(c) => write!(f, "column {c}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl SparseInstance {
    /// Reassembles an instance from its parts, checking only shape consistency.
    ///
    /// Deeper structural checks live in [`SparseInstance::check_invariants`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        dimension: usize,
        columns: Vec<SupportColumn>,
        origins: Vec<ColumnOrigin>,
        sparsity: usize,
        blocks: Vec<Range<usize>>,
        layer_sizes: Vec<usize>,
        layer_alphabets: Vec<usize>,
        params: ReductionParams,
    ) -> Result<Self> {
        if columns.len() != origins.len() {
            return Err(Error::MalformedInstance(format!(
                "{} columns but {} origins",
                columns.len(),
                origins.len()
            )));
        }
        if layer_sizes.len() != layer_alphabets.len() {
            return Err(Error::MalformedInstance("layer sizes and alphabets disagree".into()));
        }
        if let Some(c) = columns.iter().position(|c| c.dimension() != dimension) {
            return Err(Error::Dimension { expected: dimension, found: columns[c].dimension() });
        }
        let mut inst = SparseInstance {
            dimension,
            columns,
            origins,
            sparsity,
            blocks,
            layer_sizes,
            layer_alphabets,
            params,
            warnings: Vec::new(),
        };
        inst.warnings = inst.compute_warnings();
        Ok(inst)
    }

    /// `M`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn columns(&self) -> &[SupportColumn] {
        &self.columns
    }

    pub fn origins(&self) -> &[ColumnOrigin] {
        &self.origins
    }

    /// `k`: one column per vertex copy.
    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    /// Coordinate range of each edge (or hyper-edge) block.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn layer_alphabets(&self) -> &[usize] {
        &self.layer_alphabets
    }

    pub fn params(&self) -> &ReductionParams {
        &self.params
    }

    /// Notes about degenerate parameter choices, such as identity columns
    /// dominating the gadget coherence.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn num_gadget_columns(&self) -> usize {
        self.origins.iter().filter(|o| !o.is_identity()).count()
    }

    pub fn target(&self) -> Vec<f64> {
        vec![1.0; self.dimension]
    }

    /// Index of the column for `(layer, vertex, label)`.
    pub fn column_index(&self, layer: usize, vertex: usize, label: usize) -> Option<usize> {
        if layer >= self.layer_sizes.len()
            || vertex >= self.layer_sizes[layer]
            || label >= self.layer_alphabets[layer]
        {
            return None;
        }
        let offset: usize = (0..layer)
            .map(|i| self.layer_sizes[i] * self.layer_alphabets[i])
            .sum();
        Some(offset + vertex * self.layer_alphabets[layer] + label)
    }

    /// Achieved exponent `log k / log ℓ`; compare with `1 + ε`.
    pub fn sparsity_exponent(&self) -> f64 {
        (self.sparsity as f64).ln() / (self.params.ell as f64).ln()
    }

    fn compute_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let has_identity = self.origins.iter().any(ColumnOrigin::is_identity);
        let min_weight = self
            .columns
            .iter()
            .zip(&self.origins)
            .filter(|(_, o)| !o.is_identity())
            .map(|(c, _)| c.weight())
            .min();
        if let (true, Some(w)) = (has_identity, min_weight) {
            let identity_sq = exact(1, w as i128);
            let bound = self.params.gadget_bound();
            if identity_sq > bound * bound {
                out.push(format!(
                    "identity columns dominate coherence: 1/sqrt({w}) exceeds the gadget bound {bound}"
                ));
            }
        }
        out
    }

    /// Structural checks: identity span, block partition, block-aligned gadget
    /// supports with equal weight per block, provenance and sparsity bookkeeping.
    pub fn check_invariants(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |column: Option<usize>, message: String| out.push(Violation { column, message });

        let mut next = 0;
        for (b, r) in self.blocks.iter().enumerate() {
            if r.start != next || r.end <= r.start {
                push(None, format!("block {b} = {r:?} does not continue the partition at {next}"));
            }
            next = r.end;
        }
        if next != self.dimension {
            push(None, format!("blocks end at {next}, dimension is {}", self.dimension));
        }

        let pieces = self.allowed_pieces();
        if let Err(e) = &pieces {
            push(None, format!("cannot rebuild the gadget code: {e}"));
        }
        let mut identity = vec![false; self.dimension];
        for (i, (col, origin)) in self.columns.iter().zip(&self.origins).enumerate() {
            if let Err(e) = check_support(col.dimension(), col.support()) {
                push(Some(i), e.to_string());
                continue;
            }
            match *origin {
                ColumnOrigin::Identity(j) => {
                    if col.support() != [j] {
                        push(Some(i), format!("identity column {j} has support {:?}", col.support()));
                    } else if j < self.dimension {
                        identity[j] = true;
                    }
                }
                ColumnOrigin::Label { layer, vertex, label } => {
                    if self.column_index(layer, vertex, label) != Some(i) {
                        push(Some(i), format!("origin ({layer}, {vertex}, {label}) does not map to this column"));
                    }
                    let mut at = 0;
                    for (b, r) in self.blocks.iter().enumerate() {
                        let start = at;
                        while at < col.support().len() && col.support()[at] < r.end {
                            at += 1;
                        }
                        if at == start {
                            continue;
                        }
                        let piece: Vec<usize> = col.support()[start..at].iter().map(|&x| x - r.start).collect();
                        let Ok(allowed) = &pieces else { continue };
                        let Some(words) = allowed.get(layer) else { continue };
                        // Right layers carry their own label's word; left layers route through a projection.
                        let ok = if layer % 2 == 1 {
                            words.get(label) == Some(&piece)
                        } else {
                            words.contains(&piece)
                        };
                        if !ok {
                            push(Some(i), format!("block {b} holds {piece:?}, not a codeword allowed for this label"));
                        }
                    }
                }
            }
        }
        if let Some(j) = identity.iter().position(|&hit| !hit) {
            push(None, format!("identity column e_{j} is missing"));
        }
        let expected_k: usize = self.layer_sizes.iter().sum();
        if self.sparsity != expected_k {
            push(None, format!("sparsity {} differs from the vertex count {expected_k}", self.sparsity));
        }
        let gadget: usize = self.layer_sizes.iter().zip(&self.layer_alphabets).map(|(n, s)| n * s).sum();
        if gadget != self.num_gadget_columns() {
            push(None, format!("{} gadget columns, provenance implies {gadget}", self.num_gadget_columns()));
        }
        out
    }
}

impl SparseInstance {
    /// Block-relative supports by layer and label set.
    fn allowed_pieces(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        let p = &self.params;
        let limits = Limits { max_dimension: p.block_width.max(1), ..Limits::default() };
        match p.kind {
            ReductionKind::TwoLayered => {
                let m = p.hadamard_exponent.ok_or_else(|| Error::param("missing Hadamard exponent"))?;
                let code = build_hadamard_code_set(m, &limits)?;
                let words = code.codewords().iter().take(p.label_sets);
                let right = words.clone().map(|c| c.support().to_vec()).collect();
                let left = words.map(|c| complement(c).map(Codeword::into_support)).collect::<Result<_>>()?;
                Ok(vec![left, right])
            }
            ReductionKind::MultilayeredSmooth | ReductionKind::MultilayeredUnique => {
                let sys = build_incoherent_vector_system(p.ell, p.label_sets, &limits)?;
                Ok((0..p.ell)
                    .map(|layer| (0..p.label_sets).map(|i| sys.vector(i, layer).support().to_vec()).collect())
                    .collect())
            }
        }
    }
}

fn block_layout(num_edges: usize, width: usize, limits: &Limits) -> Result<(usize, Vec<Range<usize>>)> {
    let cap = limits.max_dimension as u128;
    let dimension = (num_edges as u128).saturating_mul(width as u128);
    if dimension > cap {
        return Err(Error::Budget { required: dimension, cap });
    }
    let dimension = dimension as usize;
    if dimension == 0 {
        return Err(Error::param("instance has no edges"));
    }
    let blocks = (0..num_edges).map(|e| e * width..(e + 1) * width).collect();
    Ok((dimension, blocks))
}

/// Column with `piece(e)` placed in the block of each edge in `edges`.
fn assemble<'a>(
    dimension: usize,
    blocks: &[Range<usize>],
    edges: &[usize],
    mut piece: impl FnMut(usize) -> &'a Codeword,
    what: impl FnOnce() -> String,
) -> Result<SupportColumn> {
    if edges.is_empty() {
        return Err(Error::MalformedInstance(format!("{} has no incident edges", what())));
    }
    let support = edges
        .iter()
        .flat_map(|&e| {
            let start = blocks[e].start;
            piece(e).support().iter().map(move |&x| start + x).collect::<Vec<_>>()
        })
        .collect();
    SupportColumn::new(dimension, support)
}

fn push_identity(dimension: usize, columns: &mut Vec<SupportColumn>, origins: &mut Vec<ColumnOrigin>) -> Result<()> {
    for j in 0..dimension {
        columns.push(SupportColumn::identity(dimension, j)?);
        origins.push(ColumnOrigin::Identity(j));
    }
    Ok(())
}

fn base_params(l: &LabelCoverInstance, kind: ReductionKind) -> ReductionParams {
    ReductionParams {
        kind,
        ell: 2,
        label_sets: l.sigma_w(),
        block_width: 0,
        hadamard_exponent: None,
        t_declared: None,
        smoothness: crate::label_cover::smoothness(l).value,
        num_v: l.num_v(),
        num_w: l.num_w(),
        sigma_v: l.sigma_v(),
        sigma_w: l.sigma_w(),
        num_edges: l.edges().len(),
    }
}

/// Hadamard reduction of a two-layered projection instance.
pub fn reduce_two_layered(l: &LabelCoverInstance, t_declared: Option<u64>, limits: &Limits) -> Result<SparseInstance> {
    if l.flavor() != Flavor::Projection {
        return Err(Error::Flavor { expected: "projection" });
    }
    let m = HadamardCodeSet::exponent_for(l.sigma_w());
    let code = build_hadamard_code_set(m, limits)?;
    let complements = code.codewords().iter().map(complement).collect::<Result<Vec<_>>>()?;
    let width = code.order();
    let (dimension, blocks) = block_layout(l.edges().len(), width, limits)?;

    let mut columns = Vec::new();
    let mut origins = Vec::new();
    for v in 0..l.num_v() {
        for a in 0..l.sigma_v() {
            let col = assemble(dimension, &blocks, l.edges_at_v(v), |e| &complements[l.edges()[e].project(a)], || {
                format!("left vertex {v}")
            })?;
            columns.push(col);
            origins.push(ColumnOrigin::Label { layer: 0, vertex: v, label: a });
        }
    }
    for w in 0..l.num_w() {
        for i in 0..l.sigma_w() {
            let col = assemble(dimension, &blocks, l.edges_at_w(w), |_| &code.codewords()[i], || {
                format!("right vertex {w}")
            })?;
            columns.push(col);
            origins.push(ColumnOrigin::Label { layer: 1, vertex: w, label: i });
        }
    }
    push_identity(dimension, &mut columns, &mut origins)?;

    let params = ReductionParams {
        block_width: width,
        hadamard_exponent: Some(m),
        t_declared,
        ..base_params(l, ReductionKind::TwoLayered)
    };
    SparseInstance::from_parts(
        dimension,
        columns,
        origins,
        l.num_v() + l.num_w(),
        blocks,
        vec![l.num_v(), l.num_w()],
        vec![l.sigma_v(), l.sigma_w()],
        params,
    )
}

fn reduce_layered(l: &LabelCoverInstance, ell: usize, kind: ReductionKind, limits: &Limits) -> Result<SparseInstance> {
    let ml = multilayer(l, ell)?;
    let d = l.sigma_w();
    if d > ell {
        return Err(Error::param(format!("{d} label sets need ℓ ≥ {d}, got ℓ = {ell}")));
    }
    let sys = build_incoherent_vector_system(ell, d, limits)?;
    let (dimension, blocks) = block_layout(l.edges().len(), sys.dimension(), limits)?;

    let mut columns = Vec::new();
    let mut origins = Vec::new();
    for layer in 0..ell {
        let left = ml.is_left_layer(layer);
        for vertex in 0..ml.layer_size(layer) {
            for label in 0..ml.layer_alphabet(layer) {
                let col = if left {
                    assemble(dimension, &blocks, l.edges_at_v(vertex), |e| sys.vector(l.edges()[e].project(label), layer), || {
                        format!("left vertex {vertex}")
                    })?
                } else {
                    assemble(dimension, &blocks, l.edges_at_w(vertex), |_| sys.vector(label, layer), || {
                        format!("right vertex {vertex}")
                    })?
                };
                columns.push(col);
                origins.push(ColumnOrigin::Label { layer, vertex, label });
            }
        }
    }
    push_identity(dimension, &mut columns, &mut origins)?;

    let params = ReductionParams {
        ell,
        block_width: sys.dimension(),
        ..base_params(l, kind)
    };
    SparseInstance::from_parts(
        dimension,
        columns,
        origins,
        ml.layer_sizes().iter().sum(),
        blocks,
        ml.layer_sizes(),
        ml.layer_alphabets(),
        params,
    )
}

/// Incoherent-vector-system reduction of the `ℓ`-layered lift of a projection instance.
pub fn reduce_multilayered_smooth(l: &LabelCoverInstance, ell: usize, limits: &Limits) -> Result<SparseInstance> {
    if l.flavor() != Flavor::Projection {
        return Err(Error::Flavor { expected: "projection" });
    }
    reduce_layered(l, ell, ReductionKind::MultilayeredSmooth, limits)
}

/// Incoherent-vector-system reduction of the `ℓ`-layered lift of a unique instance.
///
/// Bijective constraints never map two labels of a vertex onto the same
/// codeword, so the gadget coherence is exactly `1/ℓ` once `R ≥ 2`.
pub fn reduce_multilayered_unique(l: &LabelCoverInstance, ell: usize, limits: &Limits) -> Result<SparseInstance> {
    if l.flavor() != Flavor::Unique {
        return Err(Error::Flavor { expected: "unique" });
    }
    reduce_layered(l, ell, ReductionKind::MultilayeredUnique, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceScope {
    /// Pairs of reduction columns only.
    Gadget,
    /// All pairs, identity columns included.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub scope: CoherenceScope,
    pub mu: f64,
    pub mu_squared: Exact,
    /// Lexicographically least column pair realizing the maximum.
    pub witness: Option<(usize, usize)>,
    /// The reduction's gadget-scope bound (see [`ReductionParams::gadget_bound`]).
    pub bound_claimed: Exact,
    pub bound_satisfied: bool,
}

/// Largest `|<Φ_i, Φ_j>|` over distinct columns in `scope`, decided on exact squares.
pub fn coherence(inst: &SparseInstance, scope: CoherenceScope) -> CoherenceReport {
    let in_scope: Vec<usize> = (0..inst.columns.len())
        .filter(|&i| scope == CoherenceScope::Full || !inst.origins[i].is_identity())
        .collect();
    let (mu_squared, witness) = max_pair_overlap(inst.dimension, &in_scope, &inst.columns);
    let bound_claimed = inst.params.gadget_bound();
    CoherenceReport {
        scope,
        mu: exact::to_f64(&mu_squared).sqrt(),
        mu_squared,
        witness,
        bound_claimed,
        bound_satisfied: mu_squared <= bound_claimed * bound_claimed,
    }
}

fn max_pair_overlap(dimension: usize, ids: &[usize], columns: &[SupportColumn]) -> (Exact, Option<(usize, usize)>) {
    let mut by_coordinate: Vec<Vec<usize>> = vec![Vec::new(); dimension];
    for (pos, &i) in ids.iter().enumerate() {
        for &x in columns[i].support() {
            by_coordinate[x].push(pos);
        }
    }
    let mut best = exact(0, 1);
    let mut witness = (ids.len() >= 2).then(|| (ids[0], ids[1]));
    let mut counts = vec![0usize; ids.len()];
    let mut touched = Vec::new();
    for (pos, &i) in ids.iter().enumerate() {
        for &x in columns[i].support() {
            for &other in &by_coordinate[x] {
                if other > pos {
                    if counts[other] == 0 {
                        touched.push(other);
                    }
                    counts[other] += 1;
                }
            }
        }
        touched.sort_unstable();
        for &other in &touched {
            let j = ids[other];
            let c = counts[other] as i128;
            let sq = exact(c * c, (columns[i].weight() * columns[j].weight()) as i128);
            if sq > best {
                best = sq;
                witness = Some((i, j));
            }
            counts[other] = 0;
        }
        touched.clear();
    }
    (best, witness)
}

/// Exact `<Φ_i, Φ_j>` for two columns of an instance.
pub fn column_dot(inst: &SparseInstance, i: usize, j: usize) -> Result<exact::Dot> {
    let n = inst.columns.len();
    if i >= n || j >= n {
        return Err(Error::param(format!("column index out of range for {n} columns")));
    }
    exact::dot(&inst.columns[i], &inst.columns[j])
}

/// One column per vertex copy, chosen by the assignment's labels.
///
/// The assignment needs one layer per instance layer; use
/// [`Assignment::repeat_layers`] for the canonical assignment of a lift.
pub fn assignment_to_support(inst: &SparseInstance, a: &Assignment) -> Result<Vec<usize>> {
    a.validate(&inst.layer_sizes, &inst.layer_alphabets)?;
    let mut support = Vec::with_capacity(inst.sparsity);
    for (layer, labels) in a.layers().iter().enumerate() {
        for (vertex, &label) in labels.iter().enumerate() {
            let idx = inst
                .column_index(layer, vertex, label)
                .ok_or(Error::LabelOutOfRange { label, alphabet: inst.layer_alphabets[layer] })?;
            support.push(idx);
        }
    }
    Ok(support)
}

fn covered_mask(inst: &SparseInstance, support: &[usize]) -> Result<Vec<bool>> {
    let mut covered = vec![false; inst.dimension];
    for &c in support {
        let col = inst
            .columns
            .get(c)
            .ok_or_else(|| Error::param(format!("column {c} out of range")))?;
        for &x in col.support() {
            covered[x] = true;
        }
    }
    Ok(covered)
}

/// `|∪ supports| / M` for the selected columns.
pub fn coverage_fraction(inst: &SparseInstance, support: &[usize]) -> Result<Exact> {
    let covered = covered_mask(inst, support)?;
    let hits = covered.iter().filter(|&&c| c).count();
    Ok(exact(hits as i128, inst.dimension as i128))
}

/// Blocks with at least one coordinate left uncovered by the selected columns.
pub fn uncovered_blocks(inst: &SparseInstance, support: &[usize]) -> Result<Vec<usize>> {
    let covered = covered_mask(inst, support)?;
    Ok(inst
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, r)| covered[(*r).clone()].iter().any(|&c| !c))
        .map(|(b, _)| b)
        .collect())
}
