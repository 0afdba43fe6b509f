//! Label Cover instances and their multilayered lifts.
//!
//! A two-layered instance has left vertices `V`, right vertices `W`, and one
//! total map `Σ_V → Σ_W` per edge. In the unique flavor both alphabets have
//! the same size `R` and every map is a bijection.
//!
//! The `ℓ`-layered lift keeps one hyper-edge per base edge. Layers alternate
//! `V, W, V, W, …` (layer `0` is a copy of `V`), and a hyper-edge carries
//! `ℓ - 1` copies of the base constraint, linking every `W` layer to the `V`
//! layers on either side of it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{exact, Exact};
use crate::limits::{checked_pow_capped, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Projection,
    Unique,
}

/// One edge `(v, w)` with its constraint `Π_e: Σ_V → Σ_W` stored as a lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub v: usize,
    pub w: usize,
    pub map: Vec<usize>,
}

impl Edge {
    pub fn new(v: usize, w: usize, map: Vec<usize>) -> Self {
        Edge { v, w, map }
    }

    pub fn project(&self, label: usize) -> usize {
        self.map[label]
    }

    pub fn is_satisfied(&self, v_label: usize, w_label: usize) -> bool {
        self.map[v_label] == w_label
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCoverInstance {
    num_v: usize,
    num_w: usize,
    sigma_v: usize,
    sigma_w: usize,
    edges: Vec<Edge>,
    flavor: Flavor,
    declared_soundness: Option<Exact>,
    v_edges: Vec<Vec<usize>>,
    w_edges: Vec<Vec<usize>>,
}

/// Degree bookkeeping; `None` on a side means the degrees there differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    pub left_degree: Option<usize>,
    pub right_degree: Option<usize>,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        self.left_degree.is_some() && self.right_degree.is_some()
    }
}

fn common_degree(lists: &[Vec<usize>]) -> Option<usize> {
    let first = lists.first()?.len();
    lists.iter().all(|l| l.len() == first).then_some(first)
}

impl LabelCoverInstance {
    pub fn new(
        num_v: usize,
        num_w: usize,
        sigma_v: usize,
        sigma_w: usize,
        edges: Vec<Edge>,
        flavor: Flavor,
    ) -> Result<Self> {
        if sigma_v == 0 || sigma_w == 0 {
            return Err(Error::MalformedInstance("label alphabets must be non-empty".into()));
        }
        if flavor == Flavor::Unique && sigma_v != sigma_w {
            return Err(Error::MalformedInstance(format!(
                "unique instance needs equal alphabets, got {sigma_v} and {sigma_w}"
            )));
        }
        let mut v_edges = vec![Vec::new(); num_v];
        let mut w_edges = vec![Vec::new(); num_w];
        for (idx, e) in edges.iter().enumerate() {
            if e.v >= num_v || e.w >= num_w {
                return Err(Error::MalformedInstance(format!(
                    "edge {idx} = ({}, {}) references a missing vertex",
                    e.v, e.w
                )));
            }
            if e.map.len() != sigma_v {
                return Err(Error::MalformedInstance(format!(
                    "edge {idx} constraint has {} entries, expected {sigma_v}",
                    e.map.len()
                )));
            }
            if let Some(&bad) = e.map.iter().find(|&&b| b >= sigma_w) {
                return Err(Error::MalformedInstance(format!(
                    "edge {idx} maps into label {bad}, alphabet size is {sigma_w}"
                )));
            }
            if flavor == Flavor::Unique {
                let mut seen = vec![false; sigma_w];
                for &b in &e.map {
                    if std::mem::replace(&mut seen[b], true) {
                        return Err(Error::MalformedInstance(format!(
                            "edge {idx} constraint is not a bijection"
                        )));
                    }
                }
            }
            v_edges[e.v].push(idx);
            w_edges[e.w].push(idx);
        }
        Ok(LabelCoverInstance {
            num_v,
            num_w,
            sigma_v,
            sigma_w,
            edges,
            flavor,
            declared_soundness: None,
            v_edges,
            w_edges,
        })
    }

    /// Records the known optimum of a NO-style instance as metadata.
    pub fn with_declared_soundness(mut self, soundness: Exact) -> Self {
        self.declared_soundness = Some(soundness);
        self
    }

    /// The same instance viewed as a projection instance; bijections are projections.
    pub fn as_projection(&self) -> Self {
        LabelCoverInstance { flavor: Flavor::Projection, ..self.clone() }
    }

    pub fn num_v(&self) -> usize {
        self.num_v
    }

    pub fn num_w(&self) -> usize {
        self.num_w
    }

    pub fn sigma_v(&self) -> usize {
        self.sigma_v
    }

    pub fn sigma_w(&self) -> usize {
        self.sigma_w
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn declared_soundness(&self) -> Option<Exact> {
        self.declared_soundness
    }

    /// Indices of the edges incident to left vertex `v`.
    pub fn edges_at_v(&self, v: usize) -> &[usize] {
        &self.v_edges[v]
    }

    pub fn edges_at_w(&self, w: usize) -> &[usize] {
        &self.w_edges[w]
    }

    pub fn regularity(&self) -> Regularity {
        Regularity {
            left_degree: common_degree(&self.v_edges),
            right_degree: common_degree(&self.w_edges),
        }
    }
}

/// Per-layer labels. Two layers (`V` then `W`) for a plain instance, `ℓ` for a lift.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    layers: Vec<Vec<usize>>,
}

impl Assignment {
    pub fn new(layers: Vec<Vec<usize>>) -> Self {
        Assignment { layers }
    }

    pub fn two_layered(v_labels: Vec<usize>, w_labels: Vec<usize>) -> Self {
        Assignment { layers: vec![v_labels, w_labels] }
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &[usize] {
        &self.layers[i]
    }

    pub fn label(&self, layer: usize, vertex: usize) -> usize {
        self.layers[layer][vertex]
    }

    /// Repeats a two-layered assignment on every pair of layers of an `ℓ`-layered lift.
    pub fn repeat_layers(&self, ell: usize) -> Result<Assignment> {
        if self.layers.len() != 2 {
            return Err(Error::IncompleteAssignment(format!(
                "expected a two-layered assignment, got {} layers",
                self.layers.len()
            )));
        }
        let layers = (0..ell).map(|i| self.layers[i % 2].clone()).collect();
        Ok(Assignment { layers })
    }

    /// Checks that each layer has `sizes[i]` labels drawn from `alphabets[i]`.
    pub fn validate(&self, sizes: &[usize], alphabets: &[usize]) -> Result<()> {
        if self.layers.len() != sizes.len() {
            return Err(Error::IncompleteAssignment(format!(
                "expected {} layers, got {}",
                sizes.len(),
                self.layers.len()
            )));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.len() != sizes[i] {
                return Err(Error::IncompleteAssignment(format!(
                    "layer {i} labels {} vertices, expected {}",
                    layer.len(),
                    sizes[i]
                )));
            }
            if let Some(&label) = layer.iter().find(|&&l| l >= alphabets[i]) {
                return Err(Error::LabelOutOfRange { label, alphabet: alphabets[i] });
            }
        }
        Ok(())
    }
}

fn check_two_layered(l: &LabelCoverInstance, a: &Assignment) -> Result<()> {
    a.validate(&[l.num_v, l.num_w], &[l.sigma_v, l.sigma_w])
}

fn count_satisfied(l: &LabelCoverInstance, v_labels: &[usize], w_labels: &[usize]) -> usize {
    l.edges
        .iter()
        .filter(|e| e.is_satisfied(v_labels[e.v], w_labels[e.w]))
        .count()
}

fn fraction(hits: usize, total: usize) -> Exact {
    if total == 0 {
        exact(1, 1)
    } else {
        exact(hits as i128, total as i128)
    }
}

/// Fraction of edges `(v, w)` with `Π_e(A(v)) = A(w)`; `1` for an edgeless instance.
pub fn evaluate(l: &LabelCoverInstance, a: &Assignment) -> Result<Exact> {
    check_two_layered(l, a)?;
    let hits = count_satisfied(l, a.layer(0), a.layer(1));
    Ok(fraction(hits, l.edges.len()))
}

/// An `ℓ`-layered lift of a two-layered instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilayeredInstance {
    ell: usize,
    base: LabelCoverInstance,
}

/// Lifts `l` to `ℓ` alternating layers with one hyper-edge per base edge.
pub fn multilayer(l: &LabelCoverInstance, ell: usize) -> Result<MultilayeredInstance> {
    if ell < 2 || !ell.is_multiple_of(2) {
        return Err(Error::param(format!("layer count ℓ = {ell} must be even and at least 2")));
    }
    Ok(MultilayeredInstance { ell, base: l.clone() })
}

impl MultilayeredInstance {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn base(&self) -> &LabelCoverInstance {
        &self.base
    }

    /// Layer `i` (zero-based) is a copy of `V` when `i` is even.
    pub fn is_left_layer(&self, layer: usize) -> bool {
        layer.is_multiple_of(2)
    }

    pub fn layer_size(&self, layer: usize) -> usize {
        if self.is_left_layer(layer) {
            self.base.num_v
        } else {
            self.base.num_w
        }
    }

    pub fn layer_alphabet(&self, layer: usize) -> usize {
        if self.is_left_layer(layer) {
            self.base.sigma_v
        } else {
            self.base.sigma_w
        }
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        (0..self.ell).map(|i| self.layer_size(i)).collect()
    }

    pub fn layer_alphabets(&self) -> Vec<usize> {
        (0..self.ell).map(|i| self.layer_alphabet(i)).collect()
    }

    pub fn num_hyper_edges(&self) -> usize {
        self.base.edges.len()
    }

    /// Vertices of hyper-edge `e`, one per layer: `(v, w, v, w, …)`.
    pub fn hyper_edge(&self, e: usize) -> Vec<usize> {
        let edge = &self.base.edges[e];
        (0..self.ell)
            .map(|i| if i % 2 == 0 { edge.v } else { edge.w })
            .collect()
    }

    /// The `ℓ - 1` `(left layer, right layer)` pairs constrained in every hyper-edge.
    pub fn constraint_layers(&self) -> Vec<(usize, usize)> {
        let half = self.ell / 2;
        let forward = (0..half).map(|i| (2 * i, 2 * i + 1));
        let backward = (0..half - 1).map(|i| (2 * i + 2, 2 * i + 1));
        forward.chain(backward).collect()
    }
}

/// Result of [`evaluate_strong`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongEvaluation {
    /// Fraction of hyper-edges whose `ℓ - 1` constraints all hold.
    pub strong: Exact,
    /// `weak_profile[c]` counts hyper-edges with exactly `c` satisfied constraints.
    pub weak_profile: Vec<usize>,
}

fn satisfied_constraints(ml: &MultilayeredInstance, pairs: &[(usize, usize)], a: &Assignment, e: usize) -> usize {
    let edge = &ml.base.edges[e];
    pairs
        .iter()
        .filter(|&&(left, right)| edge.is_satisfied(a.label(left, edge.v), a.label(right, edge.w)))
        .count()
}

pub fn evaluate_strong(ml: &MultilayeredInstance, a: &Assignment) -> Result<StrongEvaluation> {
    a.validate(&ml.layer_sizes(), &ml.layer_alphabets())?;
    let pairs = ml.constraint_layers();
    let mut weak_profile = vec![0; ml.ell];
    for e in 0..ml.num_hyper_edges() {
        weak_profile[satisfied_constraints(ml, &pairs, a, e)] += 1;
    }
    let strong = fraction(weak_profile[ml.ell - 1], ml.num_hyper_edges());
    Ok(StrongEvaluation { strong, weak_profile })
}

/// Result of [`smoothness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smoothness {
    /// Largest fraction of a left vertex's edges whose constraint merges two distinct labels.
    pub value: Exact,
    /// `(v, a1, a2)` realizing `value`, when positive.
    pub witness: Option<(usize, usize, usize)>,
    /// Left vertices of degree zero, counted as vacuously smooth.
    pub isolated: Vec<usize>,
}

impl Smoothness {
    /// Whether the instance is `1/T`-smooth.
    pub fn is_smooth_for(&self, t: u64) -> bool {
        t > 0 && self.value <= exact(1, t as i128)
    }
}

/// Worst-case probability, over a random edge at `v`, that two distinct
/// labels of `v` project to the same right label.
pub fn smoothness(l: &LabelCoverInstance) -> Smoothness {
    let mut best = exact(0, 1);
    let mut witness = None;
    let mut isolated = Vec::new();
    let mut merges = vec![0usize; l.sigma_v * l.sigma_v];
    for v in 0..l.num_v {
        let incident = l.edges_at_v(v);
        if incident.is_empty() {
            isolated.push(v);
            continue;
        }
        merges.iter_mut().for_each(|m| *m = 0);
        for &e in incident {
            let map = &l.edges[e].map;
            for a1 in 0..l.sigma_v {
                for a2 in a1 + 1..l.sigma_v {
                    if map[a1] == map[a2] {
                        merges[a1 * l.sigma_v + a2] += 1;
                    }
                }
            }
        }
        for a1 in 0..l.sigma_v {
            for a2 in a1 + 1..l.sigma_v {
                let value = exact(merges[a1 * l.sigma_v + a2] as i128, incident.len() as i128);
                if value > best {
                    best = value;
                    witness = Some((v, a1, a2));
                }
            }
        }
    }
    Smoothness { value: best, witness, isolated }
}

/// Exact optimum with the lexicographically least optimal assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: Exact,
    pub witness: Assignment,
}

/// Advances a mixed-radix counter (last digit fastest); `false` once it wraps.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn search_size(radix: impl IntoIterator<Item = (usize, usize)>, cap: u128) -> Result<u128> {
    let mut total: u128 = 1;
    let mut overflow = false;
    for (alphabet, count) in radix {
        match checked_pow_capped(alphabet as u128, count as u32, u128::MAX) {
            Some(p) => match total.checked_mul(p) {
                Some(t) => total = t,
                None => overflow = true,
            },
            None => overflow = true,
        }
    }
    if overflow {
        return Err(Error::Budget { required: u128::MAX, cap });
    }
    if total > cap {
        return Err(Error::Budget { required: total, cap });
    }
    Ok(total)
}

/// Exhaustive optimum of [`evaluate`].
///
/// Only the left labels are enumerated: once they are fixed, each right
/// vertex independently takes the lowest label agreed on by the most of its
/// edges. The cap applies to the `|Σ_V|^|V|` left assignments.
pub fn brute_force_optimum(l: &LabelCoverInstance, limits: &Limits) -> Result<Optimum> {
    search_size([(l.sigma_v, l.num_v)], limits.max_search)?;
    let mut v_labels = vec![0usize; l.num_v];
    let radix = vec![l.sigma_v; l.num_v];
    let mut votes = vec![0usize; l.sigma_w];
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    loop {
        let mut w_labels = vec![0usize; l.num_w];
        let mut hits = 0;
        for w in 0..l.num_w {
            votes.iter_mut().for_each(|c| *c = 0);
            for &e in l.edges_at_w(w) {
                let edge = &l.edges[e];
                votes[edge.project(v_labels[edge.v])] += 1;
            }
            let (label, count) = votes
                .iter()
                .enumerate()
                .fold((0, 0), |acc, (b, &c)| if c > acc.1 { (b, c) } else { acc });
            w_labels[w] = label;
            hits += count;
        }
        if best.as_ref().is_none_or(|(h, _, _)| hits > *h) {
            let full = hits == l.edges.len();
            best = Some((hits, v_labels.clone(), w_labels));
            if full {
                break;
            }
        }
        if !advance(&mut v_labels, &radix) {
            break;
        }
    }
    let (hits, v, w) = best.expect("at least one assignment is enumerated");
    Ok(Optimum {
        value: fraction(hits, l.edges.len()),
        witness: Assignment::two_layered(v, w),
    })
}

/// Exhaustive optimum of the strong fraction over every per-layer assignment.
pub fn brute_force_strong_optimum(ml: &MultilayeredInstance, limits: &Limits) -> Result<Optimum> {
    let sizes = ml.layer_sizes();
    let alphabets = ml.layer_alphabets();
    search_size(alphabets.iter().copied().zip(sizes.iter().copied()), limits.max_search)?;

    let radix: Vec<usize> = sizes
        .iter()
        .zip(&alphabets)
        .flat_map(|(&n, &s)| std::iter::repeat_n(s, n))
        .collect();
    let mut digits = vec![0usize; radix.len()];
    let pairs = ml.constraint_layers();
    let target = ml.ell - 1;
    let mut best: Option<(usize, Vec<usize>)> = None;
    loop {
        let a = split_layers(&digits, &sizes);
        let hits = (0..ml.num_hyper_edges())
            .filter(|&e| satisfied_constraints(ml, &pairs, &a, e) == target)
            .count();
        if best.as_ref().is_none_or(|(h, _)| hits > *h) {
            let full = hits == ml.num_hyper_edges();
            best = Some((hits, digits.clone()));
            if full {
                break;
            }
        }
        if !advance(&mut digits, &radix) {
            break;
        }
    }
    let (hits, digits) = best.expect("at least one assignment is enumerated");
    Ok(Optimum {
        value: fraction(hits, ml.num_hyper_edges()),
        witness: split_layers(&digits, &sizes),
    })
}

fn split_layers(flat: &[usize], sizes: &[usize]) -> Assignment {
    let mut layers = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &n in sizes {
        layers.push(flat[at..at + n].to_vec());
        at += n;
    }
    Assignment::new(layers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn holds(&self, value: bool) -> bool {
        value != self.negated
    }
}

/// A 3-CNF formula whose clauses mention three distinct variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Max3SatFormula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Max3SatFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for (i, clause) in clauses.iter().enumerate() {
            if let Some(lit) = clause.iter().find(|l| l.var >= num_vars) {
                return Err(Error::MalformedFormula(format!(
                    "clause {i} uses variable {} of {num_vars}",
                    lit.var
                )));
            }
            let [a, b, c] = clause.map(|l| l.var);
            if a == b || b == c || a == c {
                return Err(Error::MalformedFormula(format!("clause {i} repeats a variable")));
            }
        }
        Ok(Max3SatFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn occurrences(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vars];
        for clause in &self.clauses {
            for lit in clause {
                counts[lit.var] += 1;
            }
        }
        counts
    }

    /// Whether every variable occurs exactly five times.
    pub fn is_five_occurrence(&self) -> bool {
        self.occurrences().iter().all(|&c| c == 5)
    }

    /// Fraction of clauses satisfied by `values`.
    pub fn satisfied_fraction(&self, values: &[bool]) -> Exact {
        let hits = self
            .clauses
            .iter()
            .filter(|c| c.iter().any(|l| l.holds(values[l.var])))
            .count();
        fraction(hits, self.clauses.len())
    }

    /// A seeded random formula with `num_vars` variables, each occurring exactly five times.
    pub fn random_five_occurrence(num_vars: usize, seed: u64) -> Result<Self> {
        if num_vars < 3 || !num_vars.is_multiple_of(3) {
            return Err(Error::param("five-occurrence formulas need a positive multiple of 3 variables"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut slots: Vec<usize> = (0..num_vars).flat_map(|v| [v; 5]).collect();
        loop {
            slots.shuffle(&mut rng);
            if slots.chunks(3).all(|c| c[0] != c[1] && c[1] != c[2] && c[0] != c[2]) {
                break;
            }
        }
        let clauses = slots
            .chunks(3)
            .map(|c| {
                [0, 1, 2].map(|i| Literal { var: c[i], negated: rng.gen_bool(0.5) })
            })
            .collect();
        Max3SatFormula::new(num_vars, clauses)
    }
}

/// Satisfying value patterns of a clause; bit `j` of a pattern is the value of its `j`-th variable.
pub fn clause_labels(clause: &[Literal; 3]) -> Vec<u8> {
    (0u8..8)
        .filter(|&p| clause.iter().enumerate().any(|(j, l)| l.holds(p >> j & 1 == 1)))
        .collect()
}

/// Clause-variable game: clauses on the left with their 7 satisfying patterns
/// as labels, variables on the right with labels `{0, 1}`, one edge per
/// variable occurrence projecting a pattern to that variable's value.
pub fn max3sat_to_label_cover(f: &Max3SatFormula) -> Result<LabelCoverInstance> {
    let mut edges = Vec::with_capacity(3 * f.clauses.len());
    for (c, clause) in f.clauses.iter().enumerate() {
        let labels = clause_labels(clause);
        for (j, lit) in clause.iter().enumerate() {
            let map = labels.iter().map(|&p| usize::from(p >> j & 1)).collect();
            edges.push(Edge::new(c, lit.var, map));
        }
    }
    LabelCoverInstance::new(f.clauses.len(), f.num_vars, 7, 2, edges, Flavor::Projection)
}

fn encode(digits: impl Iterator<Item = usize>, base: usize) -> usize {
    digits.fold(0, |acc, d| acc * base + d)
}

/// `u`-fold parallel repetition: tuples of vertices, tuples of edges,
/// and coordinatewise constraints over the product alphabets.
///
/// The cap bounds `|E|^u · |Σ_V|^u`, the size of the constraint tables.
pub fn parallel_repetition(l: &LabelCoverInstance, u: usize, limits: &Limits) -> Result<LabelCoverInstance> {
    if u == 0 {
        return Err(Error::param("repetition count must be positive"));
    }
    let cap = limits.max_search;
    let pow = |b: usize| {
        checked_pow_capped(b as u128, u as u32, cap)
            .ok_or(Error::Budget { required: u128::MAX, cap })
            .map(|x| x as usize)
    };
    let (num_v, num_w, sigma_v, sigma_w, num_e) =
        (pow(l.num_v)?, pow(l.num_w)?, pow(l.sigma_v)?, pow(l.sigma_w)?, pow(l.edges.len())?);
    let table = (num_e as u128) * (sigma_v as u128);
    if table > cap {
        return Err(Error::Budget { required: table, cap });
    }

    let radix_e = vec![l.edges.len(); u];
    let radix_a = vec![l.sigma_v; u];
    let mut edges = Vec::with_capacity(num_e);
    let mut tuple = vec![0usize; u];
    if num_e > 0 {
        loop {
            let parts: Vec<&Edge> = tuple.iter().map(|&i| &l.edges[i]).collect();
            let v = encode(parts.iter().map(|e| e.v), l.num_v);
            let w = encode(parts.iter().map(|e| e.w), l.num_w);
            let mut map = Vec::with_capacity(sigma_v);
            let mut label = vec![0usize; u];
            loop {
                map.push(encode(parts.iter().zip(&label).map(|(e, &a)| e.map[a]), l.sigma_w));
                if !advance(&mut label, &radix_a) {
                    break;
                }
            }
            edges.push(Edge::new(v, w, map));
            if !advance(&mut tuple, &radix_e) {
                break;
            }
        }
    }
    LabelCoverInstance::new(num_v, num_w, sigma_v, sigma_w, edges, l.flavor)
}

/// Test-instance families supplied by [`generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Random projection constraints consistent with a hidden perfect assignment.
    PlantedProjection { num_v: usize, num_w: usize, sigma_v: usize, sigma_w: usize, left_degree: usize },
    /// Random bijections consistent with a hidden perfect assignment.
    PlantedUnique { num_v: usize, num_w: usize, labels: usize, left_degree: usize },
    /// Independent uniformly random bijections.
    RandomUnique { num_v: usize, num_w: usize, labels: usize, left_degree: usize },
    /// An even cycle of `2·cycle` edges whose bijections compose to a fixed-point-free
    /// shift, so exactly one edge must fail: the optimum is `1 - 1/(2·cycle)`.
    AntiSatisfiableUnique { labels: usize, cycle: usize },
}

/// A generated instance plus a reference assignment when one is known.
///
/// For planted kinds the reference is the hidden perfect assignment. For the
/// anti-satisfiable gadget with at least three labels it is an assignment
/// that satisfies no edge at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub instance: LabelCoverInstance,
    pub reference: Option<Assignment>,
}

/// Left-regular bipartite edge list with equal right degrees.
fn regular_edges(num_v: usize, num_w: usize, left_degree: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    if num_v == 0 || num_w == 0 || left_degree == 0 {
        return Err(Error::param("vertex counts and degree must be positive"));
    }
    if left_degree > num_w {
        return Err(Error::param(format!("left degree {left_degree} exceeds |W| = {num_w}")));
    }
    if !(num_v * left_degree).is_multiple_of(num_w) {
        return Err(Error::param(format!(
            "|V|·degree = {} is not divisible by |W| = {num_w}",
            num_v * left_degree
        )));
    }
    let mut relabel: Vec<usize> = (0..num_w).collect();
    relabel.shuffle(rng);
    Ok((0..num_v)
        .flat_map(|v| (0..left_degree).map(move |t| (v, (v * left_degree + t) % num_w)))
        .map(|(v, w)| (v, relabel[w]))
        .collect())
}

fn random_bijection(labels: usize, pin: Option<(usize, usize)>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut map: Vec<usize> = (0..labels).collect();
    map.shuffle(rng);
    if let Some((from, to)) = pin {
        let at = map.iter().position(|&b| b == to).expect("label in range");
        map.swap(from, at);
    }
    map
}

/// Deterministic instance generator for a fixed `(kind, seed)`.
pub fn generate(kind: &GeneratorKind, seed: u64) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        GeneratorKind::PlantedProjection { num_v, num_w, sigma_v, sigma_w, left_degree } => {
            if sigma_v == 0 || sigma_w == 0 {
                return Err(Error::param("alphabets must be non-empty"));
            }
            let pairs = regular_edges(num_v, num_w, left_degree, &mut rng)?;
            let v_labels: Vec<usize> = (0..num_v).map(|_| rng.gen_range(0..sigma_v)).collect();
            let w_labels: Vec<usize> = (0..num_w).map(|_| rng.gen_range(0..sigma_w)).collect();
            let edges = pairs
                .into_iter()
                .map(|(v, w)| {
                    let mut map: Vec<usize> = (0..sigma_v).map(|_| rng.gen_range(0..sigma_w)).collect();
                    map[v_labels[v]] = w_labels[w];
                    Edge::new(v, w, map)
                })
                .collect();
            let instance = LabelCoverInstance::new(num_v, num_w, sigma_v, sigma_w, edges, Flavor::Projection)?;
            Ok(GeneratedInstance { instance, reference: Some(Assignment::two_layered(v_labels, w_labels)) })
        }
        GeneratorKind::PlantedUnique { num_v, num_w, labels, left_degree } => {
            if labels == 0 {
                return Err(Error::param("alphabet must be non-empty"));
            }
            let pairs = regular_edges(num_v, num_w, left_degree, &mut rng)?;
            let v_labels: Vec<usize> = (0..num_v).map(|_| rng.gen_range(0..labels)).collect();
            let w_labels: Vec<usize> = (0..num_w).map(|_| rng.gen_range(0..labels)).collect();
            let edges = pairs
                .into_iter()
                .map(|(v, w)| Edge::new(v, w, random_bijection(labels, Some((v_labels[v], w_labels[w])), &mut rng)))
                .collect();
            let instance = LabelCoverInstance::new(num_v, num_w, labels, labels, edges, Flavor::Unique)?;
            Ok(GeneratedInstance { instance, reference: Some(Assignment::two_layered(v_labels, w_labels)) })
        }
        GeneratorKind::RandomUnique { num_v, num_w, labels, left_degree } => {
            if labels == 0 {
                return Err(Error::param("alphabet must be non-empty"));
            }
            let pairs = regular_edges(num_v, num_w, left_degree, &mut rng)?;
            let edges = pairs
                .into_iter()
                .map(|(v, w)| Edge::new(v, w, random_bijection(labels, None, &mut rng)))
                .collect();
            let instance = LabelCoverInstance::new(num_v, num_w, labels, labels, edges, Flavor::Unique)?;
            Ok(GeneratedInstance { instance, reference: None })
        }
        GeneratorKind::AntiSatisfiableUnique { labels, cycle } => {
            if labels < 2 || cycle == 0 {
                return Err(Error::param("anti-satisfiable gadget needs at least 2 labels and a positive cycle"));
            }
            let identity: Vec<usize> = (0..labels).collect();
            let shift: Vec<usize> = (0..labels).map(|a| (a + 1) % labels).collect();
            let mut edges = Vec::with_capacity(2 * cycle);
            for i in 0..cycle {
                edges.push(Edge::new(i, i, identity.clone()));
                if i + 1 < cycle {
                    edges.push(Edge::new(i + 1, i, identity.clone()));
                } else {
                    edges.push(Edge::new(0, i, shift.clone()));
                }
            }
            let soundness = exact(2 * cycle as i128 - 1, 2 * cycle as i128);
            let instance = LabelCoverInstance::new(cycle, cycle, labels, labels, edges, Flavor::Unique)?
                .with_declared_soundness(soundness);
            let reference = (labels >= 3).then(|| Assignment::two_layered(vec![0; cycle], vec![labels - 1; cycle]));
            Ok(GeneratedInstance { instance, reference })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_clause() -> Max3SatFormula {
        Max3SatFormula::new(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap()
    }

    /// Two parallel edges between one pair, carrying the identity and the swap.
    fn contradictory_pair() -> LabelCoverInstance {
        LabelCoverInstance::new(
            1,
            1,
            2,
            2,
            vec![Edge::new(0, 0, vec![0, 1]), Edge::new(0, 0, vec![1, 0])],
            Flavor::Unique,
        )
        .unwrap()
    }

    #[test]
    fn clause_variable_game_from_one_clause() {
        let l = max3sat_to_label_cover(&single_clause()).unwrap();
        assert_eq!((l.num_v(), l.num_w(), l.sigma_v(), l.sigma_w()), (1, 3, 7, 2));
        assert_eq!(l.edges().len(), 3);
        // Label 0 is the pattern x1=1, x2=0, x3=0.
        assert_eq!(clause_labels(&single_clause().clauses()[0])[0], 0b001);
        assert_eq!(l.edges()[0].project(0), 1);
        assert_eq!(l.edges()[1].project(0), 0);
        assert_eq!(l.edges()[2].project(0), 0);
    }

    #[test]
    fn repeated_variable_is_malformed() {
        let err = Max3SatFormula::new(3, vec![[Literal::pos(0), Literal::neg(0), Literal::pos(1)]]);
        assert!(matches!(err, Err(Error::MalformedFormula(_))));
        let err = Max3SatFormula::new(2, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]);
        assert!(matches!(err, Err(Error::MalformedFormula(_))));
    }

    #[test]
    fn instance_validation() {
        let bad_map = LabelCoverInstance::new(1, 1, 2, 2, vec![Edge::new(0, 0, vec![0])], Flavor::Projection);
        assert!(bad_map.is_err());
        let not_bijective = LabelCoverInstance::new(1, 1, 2, 2, vec![Edge::new(0, 0, vec![1, 1])], Flavor::Unique);
        assert!(not_bijective.is_err());
        let unequal = LabelCoverInstance::new(1, 1, 3, 2, vec![], Flavor::Unique);
        assert!(unequal.is_err());
        let dangling = LabelCoverInstance::new(1, 1, 2, 2, vec![Edge::new(0, 3, vec![0, 1])], Flavor::Projection);
        assert!(dangling.is_err());
    }

    #[test]
    fn evaluate_conventions_and_errors() {
        let empty = LabelCoverInstance::new(2, 2, 2, 2, vec![], Flavor::Projection).unwrap();
        let a = Assignment::two_layered(vec![0, 0], vec![1, 1]);
        assert_eq!(evaluate(&empty, &a).unwrap(), exact(1, 1));

        let l = contradictory_pair();
        assert_eq!(evaluate(&l, &Assignment::two_layered(vec![0], vec![0])).unwrap(), exact(1, 2));
        assert!(matches!(
            evaluate(&l, &Assignment::two_layered(vec![], vec![0])),
            Err(Error::IncompleteAssignment(_))
        ));
        assert!(matches!(
            evaluate(&l, &Assignment::two_layered(vec![2], vec![0])),
            Err(Error::LabelOutOfRange { label: 2, alphabet: 2 })
        ));
    }

    #[test]
    fn contradictory_pair_optimum_is_half() {
        let l = contradictory_pair();
        let opt = brute_force_optimum(&l, &Limits::default()).unwrap();
        assert_eq!(opt.value, exact(1, 2));
        assert_eq!(opt.witness, Assignment::two_layered(vec![0], vec![0]));

        let ml = multilayer(&l, 4).unwrap();
        let strong = brute_force_strong_optimum(&ml, &Limits::default()).unwrap();
        assert_eq!(strong.value, exact(1, 2));
    }

    #[test]
    fn brute_force_refuses_over_budget() {
        let l = contradictory_pair();
        let tiny = Limits::default().with_max_search(1);
        assert!(matches!(brute_force_optimum(&l, &tiny), Err(Error::Budget { required: 2, cap: 1 })));
        let ml = multilayer(&l, 4).unwrap();
        assert!(matches!(
            brute_force_strong_optimum(&ml, &Limits::default().with_max_search(15)),
            Err(Error::Budget { required: 16, .. })
        ));
    }

    #[test]
    fn multilayer_structure() {
        let l = max3sat_to_label_cover(&single_clause()).unwrap();
        assert!(multilayer(&l, 3).is_err());
        assert!(multilayer(&l, 0).is_err());
        let ml = multilayer(&l, 4).unwrap();
        assert_eq!(ml.num_hyper_edges(), 3);
        assert_eq!(ml.constraint_layers(), vec![(0, 1), (2, 3), (2, 1)]);
        assert_eq!(ml.hyper_edge(1), vec![0, 1, 0, 1]);
        assert_eq!(multilayer(&l, 2).unwrap().constraint_layers(), vec![(0, 1)]);
    }

    #[test]
    fn strong_evaluation_of_split_layers() {
        let g = generate(&GeneratorKind::PlantedUnique { num_v: 2, num_w: 2, labels: 3, left_degree: 2 }, 5).unwrap();
        let ml = multilayer(&g.instance, 4).unwrap();
        let planted = g.reference.unwrap();
        let repeated = planted.repeat_layers(4).unwrap();
        let eval = evaluate_strong(&ml, &repeated).unwrap();
        assert_eq!(eval.strong, exact(1, 1));
        assert_eq!(eval.weak_profile, vec![0, 0, 0, 4]);

        // Change vertex 0 in layer 2 only: its hyper-edges lose two of three constraints.
        let mut layers = repeated.layers().to_vec();
        layers[2][0] = (layers[2][0] + 1) % 3;
        let eval = evaluate_strong(&ml, &Assignment::new(layers)).unwrap();
        assert_eq!(eval.strong, exact(2, 4));
        assert_eq!(eval.weak_profile, vec![0, 2, 0, 2]);
    }

    #[test]
    fn smoothness_extremes() {
        let unique = generate(&GeneratorKind::RandomUnique { num_v: 3, num_w: 3, labels: 4, left_degree: 2 }, 9).unwrap();
        assert_eq!(smoothness(&unique.instance).value, exact(0, 1));

        let collapse = LabelCoverInstance::new(
            1,
            2,
            3,
            2,
            vec![Edge::new(0, 0, vec![0, 0, 1]), Edge::new(0, 1, vec![0, 0, 1])],
            Flavor::Projection,
        )
        .unwrap();
        let s = smoothness(&collapse);
        assert_eq!(s.value, exact(1, 1));
        assert_eq!(s.witness, Some((0, 0, 1)));
        assert!(!s.is_smooth_for(2));

        let isolated = LabelCoverInstance::new(2, 1, 2, 2, vec![Edge::new(0, 0, vec![0, 1])], Flavor::Projection).unwrap();
        let s = smoothness(&isolated);
        assert_eq!(s.isolated, vec![1]);
        assert!(s.is_smooth_for(1_000));
    }

    #[test]
    fn parallel_repetition_sizes() {
        let l = max3sat_to_label_cover(&single_clause()).unwrap();
        let twice = parallel_repetition(&l, 2, &Limits::default()).unwrap();
        assert_eq!(twice.edges().len(), 9);
        assert_eq!((twice.sigma_v(), twice.sigma_w()), (49, 4));
        assert_eq!((twice.num_v(), twice.num_w()), (1, 9));
        assert!(parallel_repetition(&l, 0, &Limits::default()).is_err());
        assert!(matches!(
            parallel_repetition(&l, 2, &Limits::default().with_max_search(100)),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn anti_satisfiable_gadget() {
        let g = generate(&GeneratorKind::AntiSatisfiableUnique { labels: 2, cycle: 1 }, 0).unwrap();
        assert_eq!(g.instance.edges().len(), 2);
        assert_eq!(g.instance.declared_soundness(), Some(exact(1, 2)));
        assert!(g.reference.is_none());
        assert_eq!(brute_force_optimum(&g.instance, &Limits::default()).unwrap().value, exact(1, 2));

        let g = generate(&GeneratorKind::AntiSatisfiableUnique { labels: 3, cycle: 2 }, 0).unwrap();
        assert!(g.instance.regularity().is_regular());
        let reference = g.reference.unwrap();
        assert_eq!(evaluate(&g.instance, &reference).unwrap(), exact(0, 1));
    }

    #[test]
    fn generator_rejects_irregular_parameters() {
        let kind = GeneratorKind::PlantedUnique { num_v: 3, num_w: 2, labels: 2, left_degree: 1 };
        assert!(generate(&kind, 1).is_err());
        let kind = GeneratorKind::PlantedUnique { num_v: 2, num_w: 2, labels: 2, left_degree: 3 };
        assert!(generate(&kind, 1).is_err());
    }

    #[test]
    fn five_occurrence_formula() {
        let f = Max3SatFormula::random_five_occurrence(6, 3).unwrap();
        assert!(f.is_five_occurrence());
        assert_eq!(f.clauses().len(), 10);
        assert!(Max3SatFormula::random_five_occurrence(4, 3).is_err());
    }
}
