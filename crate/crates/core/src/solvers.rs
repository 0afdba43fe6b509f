//! Sparse approximation solvers in double precision.
//!
//! All solvers minimize `‖y - Φx‖₂` over coefficient vectors with a bounded
//! number of nonzeros. Ties in every selection rule go to the lowest column
//! index, so identical inputs always produce identical results and traces.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rand::Rng;

use crate::error::{Error, Result};
use crate::reduction::SparseInstance;

/// Residuals at or below this are treated as exactly zero.
pub const ZERO_RESIDUAL: f64 = 1e-10;
/// Slack allowed when comparing two solver residuals.
pub const DECISION_TOLERANCE: f64 = 1e-9;

/// Candidates whose score differs by less than this are considered tied.
const TIE: f64 = 1e-12;
/// Orthogonal remainders below this norm mark a column as linearly dependent.
const DEPENDENT: f64 = 1e-10;

/// Column-major dense dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    matrix: DMatrix<f64>,
    indicator_supports: Option<Vec<Vec<usize>>>,
}

impl Dictionary {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        Dictionary { matrix, indicator_supports: None }
    }

    /// Builds a dictionary from columns of equal length.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::Dimension { expected: rows, found: c.len() });
        }
        let matrix = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
        Ok(Dictionary::from_matrix(matrix))
    }

    /// Dense expansion of a reduction dictionary, flagged as nonnegative indicators.
    pub fn from_instance(inst: &SparseInstance) -> Self {
        let columns: Vec<Vec<f64>> = inst.columns().iter().map(|c| c.to_dense()).collect();
        let mut dict = Dictionary::from_columns(inst.dimension(), &columns).expect("columns share the instance dimension");
        dict.indicator_supports = Some(inst.columns().iter().map(|c| crate::ScaledIndicator::support(c).to_vec()).collect());
        dict
    }

    /// `cols` independent Gaussian directions in dimension `rows`, normalized.
    pub fn random_unit(rows: usize, cols: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut matrix = DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal));
        for mut col in matrix.column_iter_mut() {
            let n = col.norm();
            col /= n;
        }
        Dictionary::from_matrix(matrix)
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_indicator(&self) -> bool {
        self.indicator_supports.is_some()
    }

    /// Floating-point coherence `max_{i≠j} |<Φ_i, Φ_j>|`.
    pub fn coherence(&self) -> f64 {
        let gram = self.matrix.transpose() * &self.matrix;
        let mut mu: f64 = 0.0;
        for i in 0..self.cols() {
            for j in i + 1..self.cols() {
                mu = mu.max(gram[(i, j)].abs());
            }
        }
        mu
    }

    /// Permutes columns so that new column `t` is old column `perm[t]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let matrix = DMatrix::from_fn(self.rows(), perm.len(), |i, j| self.matrix[(i, perm[j])]);
        let indicator_supports = self
            .indicator_supports
            .as_ref()
            .map(|s| perm.iter().map(|&p| s[p].clone()).collect());
        Dictionary { matrix, indicator_supports }
    }

    fn check_unit_norm(&self) -> Result<()> {
        for (j, col) in self.matrix.column_iter().enumerate() {
            if (col.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::param(format!("column {j} does not have unit norm")));
            }
        }
        Ok(())
    }

    fn check_target(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.rows() {
            return Err(Error::Dimension { expected: self.rows(), found: y.len() });
        }
        Ok(())
    }

    fn check_support(&self, support: &[usize]) -> Result<()> {
        for (t, &j) in support.iter().enumerate() {
            if j >= self.cols() {
                return Err(Error::param(format!("column {j} out of range for {} columns", self.cols())));
            }
            if support[..t].contains(&j) {
                return Err(Error::param(format!("column {j} selected twice")));
            }
        }
        Ok(())
    }

    /// Stable hash of `(Φ, y)`, carried by every [`SolverResult`].
    pub fn fingerprint(&self, y: &[f64]) -> u64 {
        let mut h = Fnv::default();
        h.write(&(self.rows() as u64).to_le_bytes());
        h.write(&(self.cols() as u64).to_le_bytes());
        for x in self.matrix.iter().chain(y) {
            h.write(&x.to_bits().to_le_bytes());
        }
        h.0
    }
}

/// FNV-1a; stable across runs and platforms.
struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub column: usize,
    pub residual_norm: f64,
    /// The support after this step had dependent columns; a minimum-norm fit was used.
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub support: Vec<usize>,
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub trace: Vec<TraceStep>,
    /// Identifies the `(Φ, y)` pair the result was computed on.
    pub fingerprint: u64,
}

impl SolverResult {
    /// Full-length coefficient vector `x` with zeros off the support.
    pub fn dense_coefficients(&self, cols: usize) -> Vec<f64> {
        let mut x = vec![0.0; cols];
        for (&j, &c) in self.support.iter().zip(&self.coefficients) {
            x[j] = c;
        }
        x
    }
}

/// Least-squares fit over a fixed support.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    /// Numerical rank of the selected columns.
    pub rank: usize,
}

/// Orthogonal projection of `y` onto the span of the selected columns.
///
/// Uses a thin SVD, so rank-deficient supports get the minimum-norm coefficients.
pub fn restricted_least_squares(dict: &Dictionary, support: &[usize], y: &[f64]) -> Result<LeastSquares> {
    dict.check_target(y)?;
    dict.check_support(support)?;
    let target = DVector::from_column_slice(y);
    if support.is_empty() {
        return Ok(LeastSquares { coefficients: Vec::new(), residual_norm: target.norm(), rank: 0 });
    }
    let sub = dict.matrix.select_columns(support);
    let svd = sub.clone().svd(true, true);
    let largest = svd.singular_values.max();
    let eps = 1e-10 * largest.max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let coefficients = svd
        .solve(&target, eps)
        .map_err(|e| Error::param(format!("least-squares solve failed: {e}")))?;
    let residual_norm = (&target - &sub * &coefficients).norm();
    Ok(LeastSquares { coefficients: coefficients.iter().copied().collect(), residual_norm, rank })
}

/// Least squares over a fixed support with every coefficient `≥ 0`.
///
/// Lawson-Hanson active set method. `rank` is that of the final passive set.
pub fn restricted_nonnegative_least_squares(dict: &Dictionary, support: &[usize], y: &[f64]) -> Result<LeastSquares> {
    dict.check_target(y)?;
    dict.check_support(support)?;
    let target = DVector::from_column_slice(y);
    let a = dict.matrix.select_columns(support);
    let s = support.len();
    let mut x = DVector::zeros(s);
    let mut passive = vec![false; s];
    let mut rank = 0;
    let tol = 1e-12 * a.norm().max(1.0) * target.norm().max(1.0);

    for _ in 0..3 * s + 3 {
        let gradient = a.tr_mul(&(&target - &a * &x));
        let entering = (0..s)
            .filter(|&j| !passive[j] && gradient[j] > tol)
            .max_by(|&i, &j| gradient[i].total_cmp(&gradient[j]).then(j.cmp(&i)));
        let Some(j) = entering else { break };
        passive[j] = true;

        loop {
            let cols: Vec<usize> = (0..s).filter(|&i| passive[i]).collect();
            let fit = restricted_least_squares(dict, &cols.iter().map(|&i| support[i]).collect::<Vec<_>>(), y)?;
            rank = fit.rank;
            let mut z = DVector::zeros(s);
            for (&i, &c) in cols.iter().zip(&fit.coefficients) {
                z[i] = c;
            }
            if cols.iter().all(|&i| z[i] > 0.0) {
                x = z;
                break;
            }
            let alpha = cols
                .iter()
                .filter(|&&i| z[i] <= 0.0)
                .map(|&i| x[i] / (x[i] - z[i]))
                .fold(f64::INFINITY, f64::min);
            x += (z - &x) * alpha;
            for &i in &cols {
                if x[i] <= tol {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    let residual_norm = (&target - &a * &x).norm();
    Ok(LeastSquares { coefficients: x.iter().copied().collect(), residual_norm, rank })
}

/// Options shared by [`omp`] and [`ols`].
#[derive(Debug, Clone, PartialEq)]
pub struct PursuitOptions {
    /// Stop as soon as the residual norm is at or below this value.
    pub tol: f64,
    /// Columns selected before the greedy phase, in order.
    pub warm_start: Vec<usize>,
}

impl Default for PursuitOptions {
    fn default() -> Self {
        PursuitOptions { tol: ZERO_RESIDUAL, warm_start: Vec::new() }
    }
}

impl PursuitOptions {
    pub fn with_tol(tol: f64) -> Self {
        PursuitOptions { tol, warm_start: Vec::new() }
    }
}

#[derive(Clone, Copy)]
enum Rule {
    Correlation,
    ResidualReduction,
}

/// Orthogonal Matching Pursuit: picks the column most correlated with the residual.
pub fn omp(dict: &Dictionary, y: &[f64], k: usize, opts: &PursuitOptions) -> Result<SolverResult> {
    pursue(dict, y, k, opts, Rule::Correlation)
}

/// Orthogonal Least Squares: picks the column whose addition leaves the smallest residual.
pub fn ols(dict: &Dictionary, y: &[f64], k: usize, opts: &PursuitOptions) -> Result<SolverResult> {
    pursue(dict, y, k, opts, Rule::ResidualReduction)
}

/// Orthonormal basis of a growing support, kept by twice-iterated Gram-Schmidt.
struct Basis {
    vectors: Vec<DVector<f64>>,
}

impl Basis {
    fn remainder(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut q = v.clone();
        for _ in 0..2 {
            for b in &self.vectors {
                let p = b.dot(&q);
                q.axpy(-p, b, 1.0);
            }
        }
        q
    }

    fn push(&mut self, v: &DVector<f64>) {
        let q = self.remainder(v);
        let n = q.norm();
        if n > DEPENDENT {
            self.vectors.push(q / n);
        }
    }
}

fn pursue(dict: &Dictionary, y: &[f64], k: usize, opts: &PursuitOptions, rule: Rule) -> Result<SolverResult> {
    dict.check_target(y)?;
    if k == 0 {
        return Err(Error::param("sparsity must be at least 1"));
    }
    if k > dict.cols() {
        return Err(Error::param(format!("sparsity {k} exceeds {} columns", dict.cols())));
    }
    if opts.warm_start.len() > k {
        return Err(Error::param("warm start is larger than the sparsity"));
    }
    dict.check_support(&opts.warm_start)?;
    dict.check_unit_norm()?;

    let target = DVector::from_column_slice(y);
    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut selected = vec![false; dict.cols()];
    let mut basis = Basis { vectors: Vec::new() };
    let mut trace = Vec::with_capacity(k);
    let mut fit = restricted_least_squares(dict, &[], y)?;
    let mut residual = target.clone();

    let mut add = |j: usize, support: &mut Vec<usize>, basis: &mut Basis, trace: &mut Vec<TraceStep>| -> Result<(LeastSquares, DVector<f64>)> {
        support.push(j);
        selected[j] = true;
        basis.push(&dict.matrix.column(j).into_owned());
        let fit = restricted_least_squares(dict, support, y)?;
        let coeffs = DVector::from_column_slice(&fit.coefficients);
        let residual = &target - dict.matrix.select_columns(support.iter()) * coeffs;
        trace.push(TraceStep {
            column: j,
            residual_norm: fit.residual_norm,
            rank_deficient: fit.rank < support.len(),
        });
        Ok((fit, residual))
    };

    for &j in &opts.warm_start {
        (fit, residual) = add(j, &mut support, &mut basis, &mut trace)?;
    }

    while support.len() < k && fit.residual_norm > opts.tol {
        let residual_sq = residual.norm_squared();
        let mut best: Option<(usize, f64)> = None;
        for j in 0..dict.cols() {
            if support.contains(&j) {
                continue;
            }
            let column = dict.matrix.column(j);
            let score = match rule {
                Rule::Correlation => residual.dot(&column).abs(),
                Rule::ResidualReduction => {
                    let q = basis.remainder(&column.into_owned());
                    let n = q.norm();
                    if n <= DEPENDENT {
                        0.0
                    } else {
                        let c = residual.dot(&q) / n;
                        (c * c).min(residual_sq)
                    }
                }
            };
            if best.is_none_or(|(_, s)| score > s + TIE) {
                best = Some((j, score));
            }
        }
        let Some((j, _)) = best else { break };
        (fit, residual) = add(j, &mut support, &mut basis, &mut trace)?;
    }

    Ok(SolverResult {
        support,
        coefficients: fit.coefficients,
        residual_norm: fit.residual_norm,
        trace,
        fingerprint: dict.fingerprint(y),
    })
}

/// Options for [`brute_force_sparse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceOptions {
    /// Largest number of supports the search may enumerate.
    pub cap: u128,
    /// Skip subtrees whose uncovered coordinates already rule them out.
    ///
    /// Only takes effect for indicator dictionaries with the all-ones target.
    pub prune_indicator: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions { cap: crate::Limits::DEFAULT_MAX_SEARCH, prune_indicator: false }
    }
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

struct Search<'a> {
    dict: &'a Dictionary,
    k: usize,
    columns: Vec<DVector<f64>>,
    residuals: Vec<DVector<f64>>,
    bases: Vec<Vec<DVector<f64>>>,
    chosen: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    prune: Option<Pruning>,
}

struct Pruning {
    supports: Vec<Vec<usize>>,
    cover: Vec<u32>,
    uncovered: usize,
    max_weight: usize,
}

impl Search<'_> {
    fn descend(&mut self, start: usize) {
        let depth = self.chosen.len();
        if depth == self.k {
            let res = self.residuals[depth].norm_squared();
            if self.best.as_ref().is_none_or(|(b, _)| res < b - TIE) {
                self.best = Some((res, self.chosen.clone()));
            }
            return;
        }
        let remaining = self.k - depth;
        for j in start..=self.dict.cols() - remaining {
            if let (Some(p), Some((best, _))) = (&self.prune, &self.best) {
                let reach = p.max_weight * remaining;
                if p.uncovered.saturating_sub(reach) as f64 >= *best + TIE {
                    return;
                }
            }
            let mut q = self.columns[j].clone();
            for _ in 0..2 {
                for b in &self.bases[depth] {
                    let p = b.dot(&q);
                    q.axpy(-p, b, 1.0);
                }
            }
            let n = q.norm();
            let mut basis = std::mem::take(&mut self.bases[depth + 1]);
            basis.clear();
            basis.extend(self.bases[depth].iter().cloned());
            let mut residual = self.residuals[depth].clone();
            if n > DEPENDENT {
                let q = q / n;
                let c = q.dot(&residual);
                residual.axpy(-c, &q, 1.0);
                basis.push(q);
            }
            self.bases[depth + 1] = basis;
            self.residuals[depth + 1] = residual;
            if let Some(p) = &mut self.prune {
                for &x in &p.supports[j] {
                    if p.cover[x] == 0 {
                        p.uncovered -= 1;
                    }
                    p.cover[x] += 1;
                }
            }
            self.chosen.push(j);
            self.descend(j + 1);
            self.chosen.pop();
            if let Some(p) = &mut self.prune {
                for &x in &p.supports[j] {
                    p.cover[x] -= 1;
                    if p.cover[x] == 0 {
                        p.uncovered += 1;
                    }
                }
            }
        }
    }
}

/// Exact minimizer over all `C(N, k)` supports of size `k`.
///
/// Ties within `1e-12` go to the lexicographically least support.
pub fn brute_force_sparse(dict: &Dictionary, y: &[f64], k: usize, opts: &BruteForceOptions) -> Result<SolverResult> {
    dict.check_target(y)?;
    if k == 0 || k > dict.cols() {
        return Err(Error::param(format!("sparsity {k} must lie in 1..={}", dict.cols())));
    }
    let required = binomial(dict.cols(), k).unwrap_or(u128::MAX);
    if required > opts.cap {
        return Err(Error::Budget { required, cap: opts.cap });
    }

    let target = DVector::from_column_slice(y);
    let prune = match (&dict.indicator_supports, opts.prune_indicator) {
        (Some(supports), true) if y.iter().all(|&v| v == 1.0) => Some(Pruning {
            supports: supports.clone(),
            cover: vec![0; dict.rows()],
            uncovered: dict.rows(),
            max_weight: supports.iter().map(Vec::len).max().unwrap_or(0),
        }),
        _ => None,
    };
    let mut search = Search {
        dict,
        k,
        columns: dict.matrix.column_iter().map(|c| c.into_owned()).collect(),
        residuals: vec![target; k + 1],
        bases: vec![Vec::new(); k + 1],
        chosen: Vec::with_capacity(k),
        best: None,
        prune,
    };
    search.descend(0);
    let (_, support) = search.best.expect("k ≤ N leaves at least one support");

    let mut trace = Vec::with_capacity(k);
    for t in 1..=k {
        let prefix = restricted_least_squares(dict, &support[..t], y)?;
        trace.push(TraceStep {
            column: support[t - 1],
            residual_norm: prefix.residual_norm,
            rank_deficient: prefix.rank < t,
        });
    }
    let fit = restricted_least_squares(dict, &support, y)?;
    Ok(SolverResult {
        support,
        coefficients: fit.coefficients,
        residual_norm: fit.residual_norm,
        trace,
        fingerprint: dict.fingerprint(y),
    })
}

/// Outcome of comparing an algorithm against the optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueCheck {
    pub passed: bool,
    /// `f_k · ‖y - Φx*‖ - ‖y - Φx‖`; negative when the bound is violated.
    pub margin: f64,
}

/// Whether `‖y - Φx‖ ≤ f_k · ‖y - Φx*‖` (up to [`DECISION_TOLERANCE`]).
pub fn lebesgue_check(algorithm: &SolverResult, oracle: &SolverResult, f_k: f64) -> Result<LebesgueCheck> {
    if algorithm.fingerprint != oracle.fingerprint {
        return Err(Error::Mismatch("results come from different (Φ, y) pairs".into()));
    }
    let bound = f_k * oracle.residual_norm;
    Ok(LebesgueCheck {
        passed: algorithm.residual_norm <= bound + DECISION_TOLERANCE,
        margin: bound - algorithm.residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Dictionary {
        Dictionary::from_matrix(DMatrix::identity(n, n))
    }

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn omp_recovers_a_basis_vector() {
        let r = omp(&identity(5), &e(5, 3), 1, &PursuitOptions::default()).unwrap();
        assert_eq!(r.support, vec![3]);
        assert!(r.residual_norm < ZERO_RESIDUAL);
    }

    #[test]
    fn omp_breaks_ties_low() {
        let y = vec![0.5; 4];
        let r = omp(&identity(4), &y, 2, &PursuitOptions::default()).unwrap();
        assert_eq!(r.support, vec![0, 1]);
        assert!((r.residual_norm - 1.0 * 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ols_matches_omp_on_orthonormal() {
        let y = vec![0.3, -1.0, 0.2, 0.7, 0.7];
        let a = omp(&identity(5), &y, 3, &PursuitOptions::default()).unwrap();
        let b = ols(&identity(5), &y, 3, &PursuitOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.support, vec![1, 3, 4]);
    }

    #[test]
    fn early_stop_on_zero_residual() {
        let r = omp(&identity(4), &e(4, 2), 3, &PursuitOptions::default()).unwrap();
        assert_eq!(r.support, vec![2]);
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn pursuit_parameter_errors() {
        let d = identity(3);
        let y = vec![1.0; 3];
        assert!(omp(&d, &y, 4, &PursuitOptions::default()).is_err());
        assert!(omp(&d, &y, 0, &PursuitOptions::default()).is_err());
        assert!(omp(&d, &[1.0], 1, &PursuitOptions::default()).is_err());
        let scaled = Dictionary::from_matrix(DMatrix::identity(3, 3) * 2.0);
        assert!(omp(&scaled, &y, 1, &PursuitOptions::default()).is_err());
        let warm = PursuitOptions { tol: 0.0, warm_start: vec![0, 0] };
        assert!(omp(&d, &y, 2, &warm).is_err());
    }

    #[test]
    fn warm_start_is_kept() {
        let y = vec![1.0, 2.0, 3.0];
        let opts = PursuitOptions { tol: 0.0, warm_start: vec![0] };
        let r = omp(&identity(3), &y, 2, &opts).unwrap();
        assert_eq!(r.support, vec![0, 2]);
        assert_eq!(r.trace[0].column, 0);
    }

    #[test]
    fn rank_deficient_support_is_flagged() {
        let col = vec![1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0];
        let d = Dictionary::from_columns(3, &[col.clone(), col, vec![0.0, 0.0, 1.0]]).unwrap();
        let ls = restricted_least_squares(&d, &[0, 1], &[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(ls.rank, 1);
        assert!(ls.residual_norm < ZERO_RESIDUAL);
        // Minimum-norm split between the duplicates.
        assert!((ls.coefficients[0] - ls.coefficients[1]).abs() < 1e-12);
        let r = omp(&d, &[1.0, 1.0, 1.0], 3, &PursuitOptions::default()).unwrap();
        assert!(r.trace.iter().all(|s| !s.rank_deficient));
        let warm = PursuitOptions { tol: 0.0, warm_start: vec![0, 1] };
        let r = omp(&d, &[1.0, 1.0, 1.0], 3, &warm).unwrap();
        assert!(r.trace[1].rank_deficient);
    }

    #[test]
    fn empty_support_residual_is_target_norm() {
        let ls = restricted_least_squares(&identity(4), &[], &[1.0; 4]).unwrap();
        assert_eq!(ls.residual_norm, 2.0);
        assert!(restricted_least_squares(&identity(4), &[7], &[1.0; 4]).is_err());
    }

    #[test]
    fn brute_force_on_identity_takes_largest_entries() {
        let y = vec![0.1, -3.0, 2.0, 2.0, 0.5];
        let r = brute_force_sparse(&identity(5), &y, 2, &BruteForceOptions::default()).unwrap();
        assert_eq!(r.support, vec![1, 2]);
        assert!((r.residual_norm - (0.01f64 + 4.0 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn brute_force_budget() {
        let opts = BruteForceOptions { cap: 9, prune_indicator: false };
        let err = brute_force_sparse(&identity(5), &[1.0; 5], 2, &opts).unwrap_err();
        assert_eq!(err, Error::Budget { required: 10, cap: 9 });
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(40, 5), Some(658_008));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
    }

    #[test]
    fn lebesgue_check_margins() {
        let d = identity(3);
        let y = e(3, 0);
        let a = omp(&d, &y, 1, &PursuitOptions::default()).unwrap();
        let o = brute_force_sparse(&d, &y, 1, &BruteForceOptions::default()).unwrap();
        let c = lebesgue_check(&a, &o, 2.0).unwrap();
        assert!(c.passed);
        assert_eq!(c.margin, 0.0);
        let other = omp(&d, &e(3, 1), 1, &PursuitOptions::default()).unwrap();
        assert!(matches!(lebesgue_check(&a, &other, 2.0), Err(Error::Mismatch(_))));
    }

    #[test]
    fn random_dictionary_is_unit_norm_and_seeded() {
        let a = Dictionary::random_unit(10, 6, 4);
        assert!(a.check_unit_norm().is_ok());
        assert_eq!(a, Dictionary::random_unit(10, 6, 4));
        assert_ne!(a, Dictionary::random_unit(10, 6, 5));
        assert!(a.coherence() < 1.0);
    }

    #[test]
    fn nonnegative_fit_clips_negative_directions() {
        let d = identity(3);
        let fit = restricted_nonnegative_least_squares(&d, &[0, 1, 2], &[1.0, -1.0, 2.0]).unwrap();
        for (c, want) in fit.coefficients.iter().zip([1.0, 0.0, 2.0]) {
            assert!((c - want).abs() < 1e-12);
        }
        assert!((fit.residual_norm - 1.0).abs() < 1e-12);
        assert_eq!(restricted_nonnegative_least_squares(&d, &[], &[1.0, 0.0, 0.0]).unwrap().residual_norm, 1.0);
    }
}
