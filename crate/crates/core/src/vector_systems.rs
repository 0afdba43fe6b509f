//! Codeword families used as reduction gadgets.
//!
//! Two families are provided:
//!
//! * [`HadamardCodeSet`]: the non-constant rows of a Sylvester Hadamard matrix
//!   read as 0/1 indicators. Any two of them overlap on exactly a quarter of
//!   the coordinates, so their normalized dot product is exactly `1/2`.
//! * [`IncoherentVectorSystem`]: `d` sets of `ℓ` vectors in dimension `ℓ^d`.
//!   Vectors in the same set partition the coordinates; vectors in different
//!   sets have dot product exactly `1/ℓ`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{self, check_support, exact, Exact, ScaledIndicator};
use crate::limits::{checked_pow_capped, uncapped_pow, Limits};

/// A unit-norm 0/1 codeword, stored as its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    length: usize,
    support: Vec<usize>,
}

impl Codeword {
    pub fn new(length: usize, support: Vec<usize>) -> Result<Self> {
        check_support(length, &support)?;
        Ok(Codeword { length, support })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn into_support(self) -> Vec<usize> {
        self.support
    }

    /// Dense expansion with entries `0` or `1/sqrt(|support|)`.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.length];
        let eta = self.entry_value();
        for &i in &self.support {
            out[i] = eta;
        }
        out
    }
}

impl ScaledIndicator for Codeword {
    fn dimension(&self) -> usize {
        self.length
    }

    fn support(&self) -> &[usize] {
        &self.support
    }
}

/// `<a, b>` for two codewords.
pub fn dot(a: &Codeword, b: &Codeword) -> Result<exact::Dot> {
    exact::dot(a, b)
}

/// Complement of a half-weight codeword.
///
/// The result is renormalized, so a codeword and its complement are
/// orthogonal unit vectors.
pub fn complement(c: &Codeword) -> Result<Codeword> {
    if !c.length.is_multiple_of(2) || c.support.len() * 2 != c.length {
        return Err(Error::GadgetShape(format!(
            "complement needs support of size length/2, got {} of {}",
            c.support.len(),
            c.length
        )));
    }
    let mut inside = vec![false; c.length];
    for &i in &c.support {
        inside[i] = true;
    }
    let support = (0..c.length).filter(|&i| !inside[i]).collect();
    Codeword::new(c.length, support)
}

/// Non-constant rows of the Sylvester Hadamard matrix of order `2^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardCodeSet {
    order: usize,
    codewords: Vec<Codeword>,
}

impl HadamardCodeSet {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Smallest `m` whose code set has at least `count` codewords.
    pub fn exponent_for(count: usize) -> u32 {
        let mut m = 1;
        while (1usize << m) - 1 < count {
            m += 1;
        }
        m
    }
}

/// Builds the code set of order `2^m` by Sylvester doubling.
///
/// `+1` entries become support coordinates. The all-ones row is dropped and
/// the remaining `2^m - 1` codewords are sorted lexicographically by support.
pub fn build_hadamard_code_set(m: u32, limits: &Limits) -> Result<HadamardCodeSet> {
    if m == 0 {
        return Err(Error::param("Hadamard exponent must be at least 1"));
    }
    let cap = limits.max_dimension as u128;
    let order = checked_pow_capped(2, m, cap).ok_or(Error::Budget { required: uncapped_pow(2, m), cap })? as usize;

    let mut rows: Vec<Vec<bool>> = vec![vec![true]];
    while rows.len() < order {
        let n = rows.len();
        let mut next = Vec::with_capacity(2 * n);
        for row in &rows {
            let mut r = row.clone();
            r.extend_from_slice(row);
            next.push(r);
        }
        for row in &rows {
            let mut r = row.clone();
            r.extend(row.iter().map(|&x| !x));
            next.push(r);
        }
        rows = next;
    }

    let mut codewords = rows
        .into_iter()
        .filter(|row| !row.iter().all(|&x| x))
        .map(|row| {
            let support = row
                .iter()
                .enumerate()
                .filter_map(|(i, &plus)| plus.then_some(i))
                .collect();
            Codeword::new(order, support)
        })
        .collect::<Result<Vec<_>>>()?;
    codewords.sort();
    Ok(HadamardCodeSet { order, codewords })
}

/// Outcome of one exact gadget property over a Hadamard code set.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSetCheck {
    pub name: &'static str,
    pub passed: bool,
    /// First offending pair of codeword indices.
    pub pair: Option<(usize, usize)>,
    pub detail: Option<String>,
}

/// Checks that distinct codewords have dot `1/2`, that a codeword and the
/// complement of another have dot `1/2`, and that each codeword is
/// orthogonal to its own complement.
pub fn verify_code_set(code: &HadamardCodeSet) -> Result<Vec<CodeSetCheck>> {
    let words = code.codewords();
    let complements = words.iter().map(complement).collect::<Result<Vec<_>>>()?;
    let n = words.len();
    let distinct = || (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    Ok(vec![
        scan("pairwise", distinct().filter(|(i, j)| i < j), |i, j| (&words[i], &words[j]), exact(1, 4))?,
        scan("complement-cross", distinct(), |i, j| (&words[i], &complements[j]), exact(1, 4))?,
        scan("complement-self", (0..n).map(|i| (i, i)), |i, j| (&words[i], &complements[j]), exact(0, 1))?,
    ])
}

fn scan<'a>(
    name: &'static str,
    pairs: impl Iterator<Item = (usize, usize)>,
    vectors: impl Fn(usize, usize) -> (&'a Codeword, &'a Codeword),
    want: Exact,
) -> Result<CodeSetCheck> {
    for (i, j) in pairs {
        let (a, b) = vectors(i, j);
        let d = dot(a, b)?;
        if d.squared != want {
            let detail = format!("dot^2 = {}, expected {want}", d.squared);
            return Ok(CodeSetCheck { name, passed: false, pair: Some((i, j)), detail: Some(detail) });
        }
    }
    Ok(CodeSetCheck { name, passed: true, pair: None, detail: None })
}

/// `d` sets of `ℓ` vectors of dimension `ℓ^d`; see the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncoherentVectorSystem {
    ell: usize,
    d: usize,
    sets: Vec<Vec<Codeword>>,
}

impl IncoherentVectorSystem {
    /// Assembles a system from raw sets without checking any property.
    ///
    /// `sets[i][j]` is member `j` of set `i`. Use [`verify_system`] to check it.
    pub fn from_sets(ell: usize, d: usize, sets: Vec<Vec<Codeword>>) -> Self {
        IncoherentVectorSystem { ell, d, sets }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `ℓ^d`.
    pub fn dimension(&self) -> usize {
        self.ell.pow(self.d as u32)
    }

    pub fn sets(&self) -> &[Vec<Codeword>] {
        &self.sets
    }

    /// Member `member` of set `set`, both zero-based.
    ///
    /// In the reductions the set is chosen by a label and the member by a layer.
    pub fn vector(&self, set: usize, member: usize) -> &Codeword {
        &self.sets[set][member]
    }

    pub fn vectors(&self) -> impl Iterator<Item = ((usize, usize), &Codeword)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, set)| set.iter().enumerate().map(move |(j, c)| ((i, j), c)))
    }
}

/// Builds `V(ℓ, d)` by repeated seed expansion.
///
/// Step `k` (for `k = 1..=d`) holds `ℓ` seeds of length `ℓ^k`: the first step
/// uses the unit strings, every later step repeats each coordinate of the
/// previous seeds `ℓ` times in place. Concatenating `ℓ^(d-k)` copies of each
/// seed gives the members of set `d - k` (zero-based).
pub fn build_incoherent_vector_system(
    ell: usize,
    d: usize,
    limits: &Limits,
) -> Result<IncoherentVectorSystem> {
    if ell == 0 || d == 0 {
        return Err(Error::param("ℓ and d must be positive"));
    }
    if d > ell {
        return Err(Error::param(format!("d = {d} must not exceed ℓ = {ell}")));
    }
    let cap = limits.max_dimension as u128;
    let dimension = checked_pow_capped(ell as u128, d as u32, cap)
        .ok_or(Error::Budget { required: uncapped_pow(ell as u128, d as u32), cap })? as usize;

    let mut sets: Vec<Vec<Codeword>> = vec![Vec::new(); d];
    let mut seeds: Vec<Vec<usize>> = (0..ell).map(|j| vec![j]).collect();
    let mut seed_len = ell;
    for step in 1..=d {
        if step > 1 {
            seeds = seeds
                .iter()
                .map(|seed| {
                    seed.iter()
                        .flat_map(|&s| (s * ell)..(s * ell + ell))
                        .collect()
                })
                .collect();
            seed_len *= ell;
        }
        let copies = dimension / seed_len;
        let mut members = seeds
            .iter()
            .map(|seed| {
                let support = (0..copies)
                    .flat_map(|c| seed.iter().map(move |&s| c * seed_len + s))
                    .collect();
                Codeword::new(dimension, support)
            })
            .collect::<Result<Vec<_>>>()?;
        members.sort();
        sets[d - step] = members;
    }
    Ok(IncoherentVectorSystem { ell, d, sets })
}

/// Properties checked by [`verify_system`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemProperty {
    /// `ℓd` unit vectors of dimension `ℓ^d`, each with `ℓ^(d-1)` equal entries.
    Shape,
    /// `d` pairwise distinct sets of `ℓ` vectors each.
    Sets,
    /// Members of one set are disjoint and together cover every coordinate.
    Partition,
    /// Vectors from different sets have dot product exactly `1/ℓ`.
    CrossSetDot,
    /// Members of every set are sorted lexicographically by support.
    Ordering,
}

impl fmt::Display for SystemProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SystemProperty::Shape => "shape",
            SystemProperty::Sets => "sets",
            SystemProperty::Partition => "partition",
            SystemProperty::CrossSetDot => "cross-set-dot",
            SystemProperty::Ordering => "ordering",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub property: SystemProperty,
    pub passed: bool,
    /// First offending `(set, member)` pair, when the failure involves two vectors.
    pub pair: Option<((usize, usize), (usize, usize))>,
    pub detail: Option<String>,
}

impl PropertyCheck {
    fn pass(property: SystemProperty) -> Self {
        PropertyCheck { property, passed: true, pair: None, detail: None }
    }

    fn fail(
        property: SystemProperty,
        pair: Option<((usize, usize), (usize, usize))>,
        detail: String,
    ) -> Self {
        PropertyCheck { property, passed: false, pair, detail: Some(detail) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemReport {
    pub ell: usize,
    pub d: usize,
    pub checks: Vec<PropertyCheck>,
}

impl SystemReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, property: SystemProperty) -> &PropertyCheck {
        self.checks
            .iter()
            .find(|c| c.property == property)
            .expect("every property is checked")
    }
}

/// Checks every property of an incoherent vector system exactly.
pub fn verify_system(sys: &IncoherentVectorSystem) -> SystemReport {
    let (ell, d) = (sys.ell, sys.d);
    let checks = vec![
        check_shape(sys),
        check_sets(sys),
        check_partition(sys),
        check_cross_dot(sys),
        check_ordering(sys),
    ];
    SystemReport { ell, d, checks }
}

fn check_shape(sys: &IncoherentVectorSystem) -> PropertyCheck {
    let p = SystemProperty::Shape;
    let Some(dimension) = sys.ell.checked_pow(sys.d as u32) else {
        return PropertyCheck::fail(p, None, "ℓ^d overflows".into());
    };
    let weight = dimension / sys.ell.max(1);
    let count: usize = sys.sets.iter().map(Vec::len).sum();
    if count != sys.ell * sys.d {
        return PropertyCheck::fail(p, None, format!("{count} vectors, expected {}", sys.ell * sys.d));
    }
    for ((i, j), c) in sys.vectors() {
        if c.length() != dimension || c.weight() != weight {
            return PropertyCheck::fail(
                p,
                Some(((i, j), (i, j))),
                format!(
                    "vector has dimension {} and weight {}, expected {dimension} and {weight}",
                    c.length(),
                    c.weight()
                ),
            );
        }
        if c.entry_value_squared() * exact(c.weight() as i128, 1) != exact(1, 1) {
            return PropertyCheck::fail(p, Some(((i, j), (i, j))), "vector is not unit norm".into());
        }
    }
    PropertyCheck::pass(p)
}

fn check_sets(sys: &IncoherentVectorSystem) -> PropertyCheck {
    let p = SystemProperty::Sets;
    if sys.sets.len() != sys.d {
        return PropertyCheck::fail(p, None, format!("{} sets, expected {}", sys.sets.len(), sys.d));
    }
    if let Some(i) = sys.sets.iter().position(|s| s.len() != sys.ell) {
        return PropertyCheck::fail(p, None, format!("set {i} has {} members", sys.sets[i].len()));
    }
    let all: Vec<_> = sys.vectors().collect();
    for (x, (a, ca)) in all.iter().enumerate() {
        for (b, cb) in &all[x + 1..] {
            if a.0 != b.0 && ca == cb {
                return PropertyCheck::fail(p, Some((*a, *b)), "vector shared by two sets".into());
            }
        }
    }
    PropertyCheck::pass(p)
}

fn check_partition(sys: &IncoherentVectorSystem) -> PropertyCheck {
    let p = SystemProperty::Partition;
    let dimension = sys.dimension();
    for (i, set) in sys.sets.iter().enumerate() {
        for a in 0..set.len() {
            for b in a + 1..set.len() {
                let overlap = exact::intersection_count(set[a].support(), set[b].support());
                if overlap != 0 {
                    return PropertyCheck::fail(
                        p,
                        Some(((i, a), (i, b))),
                        format!("members overlap on {overlap} coordinates"),
                    );
                }
            }
        }
        let mut covered = vec![false; dimension];
        for c in set {
            for &x in c.support() {
                if x < dimension {
                    covered[x] = true;
                }
            }
        }
        if let Some(x) = covered.iter().position(|&hit| !hit) {
            return PropertyCheck::fail(p, None, format!("set {i} does not cover coordinate {x}"));
        }
    }
    PropertyCheck::pass(p)
}

fn check_cross_dot(sys: &IncoherentVectorSystem) -> PropertyCheck {
    let p = SystemProperty::CrossSetDot;
    let target: Exact = exact(1, (sys.ell as i128) * (sys.ell as i128));
    let all: Vec<_> = sys.vectors().collect();
    for (x, (a, ca)) in all.iter().enumerate() {
        for (b, cb) in &all[x + 1..] {
            if a.0 == b.0 {
                continue;
            }
            let got = match exact::dot(*ca, *cb) {
                Ok(dot) => dot.squared,
                Err(e) => return PropertyCheck::fail(p, Some((*a, *b)), e.to_string()),
            };
            if got != target {
                return PropertyCheck::fail(p, Some((*a, *b)), format!("dot² = {got}, expected {target}"));
            }
        }
    }
    PropertyCheck::pass(p)
}

fn check_ordering(sys: &IncoherentVectorSystem) -> PropertyCheck {
    let p = SystemProperty::Ordering;
    for (i, set) in sys.sets.iter().enumerate() {
        if let Some(j) = set.windows(2).position(|w| w[0].support() >= w[1].support()) {
            return PropertyCheck::fail(p, Some(((i, j), (i, j + 1))), "members out of order".into());
        }
    }
    PropertyCheck::pass(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(length: usize, support: &[usize]) -> Codeword {
        Codeword::new(length, support.to_vec()).unwrap()
    }

    #[test]
    fn hadamard_order_four() {
        let set = build_hadamard_code_set(2, &Limits::default()).unwrap();
        assert_eq!(set.order(), 4);
        let supports: Vec<_> = set.codewords().iter().map(|c| c.support().to_vec()).collect();
        assert_eq!(supports, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
    }

    #[test]
    fn hadamard_order_two() {
        let set = build_hadamard_code_set(1, &Limits::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.codewords()[0], cw(2, &[0]));
    }

    #[test]
    fn hadamard_rejects_bad_exponent() {
        assert!(matches!(build_hadamard_code_set(0, &Limits::default()), Err(Error::Parameter(_))));
        let tight = Limits::default().with_max_dimension(8);
        assert!(build_hadamard_code_set(3, &tight).is_ok());
        assert!(matches!(build_hadamard_code_set(4, &tight), Err(Error::Budget { required: 16, cap: 8 })));
        assert!(build_hadamard_code_set(200, &Limits::default()).is_err());
    }

    #[test]
    fn exponent_for_counts() {
        assert_eq!(HadamardCodeSet::exponent_for(1), 1);
        assert_eq!(HadamardCodeSet::exponent_for(2), 2);
        assert_eq!(HadamardCodeSet::exponent_for(3), 2);
        assert_eq!(HadamardCodeSet::exponent_for(4), 3);
        assert_eq!(HadamardCodeSet::exponent_for(7), 3);
        assert_eq!(HadamardCodeSet::exponent_for(8), 4);
    }

    #[test]
    fn complement_of_half_support() {
        let c = cw(4, &[0, 2]);
        let bar = complement(&c).unwrap();
        assert_eq!(bar.support(), &[1, 3]);
        assert_eq!(dot(&c, &bar).unwrap().squared, exact(0, 1));
        assert_eq!(complement(&bar).unwrap(), c);
    }

    #[test]
    fn complement_rejects_unbalanced() {
        assert!(matches!(complement(&cw(4, &[0])), Err(Error::GadgetShape(_))));
        assert!(matches!(complement(&cw(3, &[0])), Err(Error::GadgetShape(_))));
    }

    #[test]
    fn dot_basics() {
        let a = cw(6, &[0, 1, 2]);
        assert_eq!(dot(&a, &a).unwrap().squared, exact(1, 1));
        assert_eq!(dot(&a, &cw(6, &[3, 4])).unwrap().squared, exact(0, 1));
        assert!(matches!(dot(&a, &cw(5, &[0])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn system_three_three_bottom_level() {
        let sys = build_incoherent_vector_system(3, 3, &Limits::default()).unwrap();
        let bottom = &sys.sets()[2];
        let expected = [
            "100100100100100100100100100",
            "010010010010010010010010010",
            "001001001001001001001001001",
        ];
        for (c, pattern) in bottom.iter().zip(expected) {
            let s: String = (0..27)
                .map(|x| if c.support().contains(&x) { '1' } else { '0' })
                .collect();
            assert_eq!(s, pattern);
        }
        // Second level: expanded seeds 111000000, 000111000, 000000111, tiled three times.
        assert_eq!(&sys.sets()[1][0].support()[..3], &[0, 1, 2]);
        assert_eq!(sys.sets()[1][0].support()[3], 9);
        assert!(verify_system(&sys).all_passed());
    }

    #[test]
    fn system_base_case() {
        let sys = build_incoherent_vector_system(2, 1, &Limits::default()).unwrap();
        assert_eq!(sys.dimension(), 2);
        assert_eq!(sys.vector(0, 0), &cw(2, &[0]));
        assert_eq!(sys.vector(0, 1), &cw(2, &[1]));
        assert!(verify_system(&sys).all_passed());
    }

    #[test]
    fn system_rejects_bad_parameters() {
        let lim = Limits::default();
        assert!(build_incoherent_vector_system(2, 3, &lim).is_err());
        assert!(build_incoherent_vector_system(0, 0, &lim).is_err());
        let tight = Limits::default().with_max_dimension(27);
        assert!(build_incoherent_vector_system(3, 3, &tight).is_ok());
        assert!(build_incoherent_vector_system(4, 3, &tight).is_err());
    }

    #[test]
    fn injected_fault_is_reported() {
        let sys = build_incoherent_vector_system(3, 3, &Limits::default()).unwrap();
        let mut sets = sys.sets().to_vec();
        // Move one coordinate of set 0, member 0 onto a coordinate owned by member 1.
        let mut support = sets[0][0].support().to_vec();
        let stolen = sets[0][1].support()[0];
        support.pop();
        support.push(stolen);
        support.sort();
        sets[0][0] = Codeword::new(27, support).unwrap();
        let report = verify_system(&IncoherentVectorSystem::from_sets(3, 3, sets));
        assert!(!report.all_passed());
        let partition = report.check(SystemProperty::Partition);
        assert!(!partition.passed);
        assert_eq!(partition.pair, Some(((0, 0), (0, 1))));
        assert!(report.check(SystemProperty::Shape).passed);
    }
}
