use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsehard::exact::exact;
use sparsehard::label_cover::{brute_force_optimum, evaluate, generate, smoothness, Assignment, GeneratorKind};
use sparsehard::reduction::{
    assignment_to_support, coherence, coverage_fraction, reduce_multilayered_smooth, reduce_multilayered_unique,
    reduce_two_layered, CoherenceScope, SparseInstance,
};
use sparsehard::solvers::{
    brute_force_sparse, ols, omp, restricted_least_squares, BruteForceOptions, Dictionary, PursuitOptions,
    ZERO_RESIDUAL,
};
use sparsehard::{Limits, ScaledIndicator};

#[derive(Debug, Clone, Copy)]
enum Kind {
    Two,
    Smooth(usize),
    Unique(usize),
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Two), (1..=2usize).prop_map(|h| Kind::Smooth(2 * h)), (1..=2usize).prop_map(|h| Kind::Unique(2 * h))]
}

/// A planted unique instance reduced by `kind`, with its perfect assignment.
fn planted(kind: Kind, num_v: usize, labels: usize, seed: u64) -> Option<(SparseInstance, Assignment)> {
    let g = generate(&GeneratorKind::PlantedUnique { num_v, num_w: num_v, labels, left_degree: 1 }, seed).ok()?;
    let reference = g.reference.unwrap();
    let lim = Limits::default();
    let (inst, ell) = match kind {
        Kind::Two => (reduce_two_layered(&g.instance.as_projection(), None, &lim).ok()?, 2),
        Kind::Smooth(ell) => (reduce_multilayered_smooth(&g.instance.as_projection(), ell, &lim).ok()?, ell),
        Kind::Unique(ell) => (reduce_multilayered_unique(&g.instance, ell, &lim).ok()?, ell),
    };
    let a = if ell == 2 { reference } else { reference.repeat_layers(ell).unwrap() };
    Some((inst, a))
}

fn random_dictionary_case() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (2..=7usize, 2..=9usize, any::<u64>()).prop_flat_map(|(rows, cols, seed)| (Just(rows), Just(cols), 1..=cols.min(3), Just(seed)))
}

fn target(rows: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_support_is_an_exact_cover(kind in kind(), num_v in 1..=3usize, labels in 2..=4usize, seed in any::<u64>()) {
        let Some((inst, a)) = planted(kind, num_v, labels, seed) else { return Ok(()) };
        prop_assert!(inst.check_invariants().is_empty());
        let support = assignment_to_support(&inst, &a).unwrap();
        prop_assert_eq!(support.len(), inst.sparsity());
        prop_assert_eq!(coverage_fraction(&inst, &support).unwrap(), exact(1, 1));
        let fit = restricted_least_squares(&Dictionary::from_instance(&inst), &support, &inst.target()).unwrap();
        prop_assert!(fit.residual_norm < ZERO_RESIDUAL);
    }

    #[test]
    fn gadget_coherence_respects_its_bound(kind in kind(), num_v in 1..=3usize, labels in 2..=4usize, seed in any::<u64>()) {
        let Some((inst, _)) = planted(kind, num_v, labels, seed) else { return Ok(()) };
        let report = coherence(&inst, CoherenceScope::Gadget);
        let bound = inst.params().gadget_bound();
        prop_assert!(report.mu_squared <= bound * bound);
        prop_assert!(report.bound_satisfied);
        let full = coherence(&inst, CoherenceScope::Full);
        prop_assert!(full.mu_squared >= report.mu_squared);
    }

    #[test]
    fn zero_residual_implies_full_coverage(kind in kind(), labels in 2..=3usize, seed in any::<u64>(), pick in any::<u64>()) {
        let Some((inst, _)) = planted(kind, 1, labels, seed) else { return Ok(()) };
        let dict = Dictionary::from_instance(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let k = inst.sparsity();
        let support: Vec<usize> = rand::seq::index::sample(&mut rng, inst.num_gadget_columns(), k.min(inst.num_gadget_columns())).into_vec();
        let fit = restricted_least_squares(&dict, &support, &inst.target()).unwrap();
        let cov = coverage_fraction(&inst, &support).unwrap();
        if fit.residual_norm < ZERO_RESIDUAL {
            prop_assert_eq!(cov, exact(1, 1));
        }
        // Disjoint supports covering everything form an exact partition, which fits exactly.
        let total: usize = support.iter().map(|&c| inst.columns()[c].weight()).sum();
        if cov == exact(1, 1) && total == inst.dimension() {
            prop_assert!(fit.residual_norm < ZERO_RESIDUAL);
        }
    }

    #[test]
    fn evaluation_is_a_fraction_below_the_optimum(num_v in 1..=3usize, labels in 2..=3usize, seed in any::<u64>(), pick in any::<u64>()) {
        let g = generate(&GeneratorKind::RandomUnique { num_v, num_w: num_v, labels, left_degree: 1 }, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let a = Assignment::two_layered(
            (0..num_v).map(|_| rng.gen_range(0..labels)).collect(),
            (0..num_v).map(|_| rng.gen_range(0..labels)).collect(),
        );
        let value = evaluate(&g.instance, &a).unwrap();
        prop_assert!(value >= exact(0, 1) && value <= exact(1, 1));
        prop_assert!(value <= brute_force_optimum(&g.instance, &Limits::default()).unwrap().value);
        let s = smoothness(&g.instance).value;
        prop_assert_eq!(s, exact(0, 1));
    }

    #[test]
    fn solver_results_are_consistent((rows, cols, k, seed) in random_dictionary_case()) {
        let dict = Dictionary::random_unit(rows, cols, seed);
        let y = target(rows, seed ^ 0x5eed);
        for r in [
            omp(&dict, &y, k, &PursuitOptions::default()).unwrap(),
            ols(&dict, &y, k, &PursuitOptions::default()).unwrap(),
            brute_force_sparse(&dict, &y, k, &BruteForceOptions::default()).unwrap(),
        ] {
            prop_assert!(r.support.len() <= k);
            let x = nalgebra::DVector::from_vec(r.dense_coefficients(cols));
            let recomputed = (nalgebra::DVector::from_column_slice(&y) - dict.matrix() * x).norm();
            prop_assert!((recomputed - r.residual_norm).abs() < 1e-9);
            prop_assert!(r.trace.windows(2).all(|w| w[1].residual_norm <= w[0].residual_norm + 1e-9));
        }
    }

    #[test]
    fn solvers_are_deterministic((rows, cols, k, seed) in random_dictionary_case()) {
        let dict = Dictionary::random_unit(rows, cols, seed);
        let y = target(rows, seed);
        prop_assert_eq!(omp(&dict, &y, k, &PursuitOptions::default()).unwrap(), omp(&dict, &y, k, &PursuitOptions::default()).unwrap());
        prop_assert_eq!(ols(&dict, &y, k, &PursuitOptions::default()).unwrap(), ols(&dict, &y, k, &PursuitOptions::default()).unwrap());
        let o = BruteForceOptions::default();
        prop_assert_eq!(brute_force_sparse(&dict, &y, k, &o).unwrap(), brute_force_sparse(&dict, &y, k, &o).unwrap());
    }

    #[test]
    fn optimum_is_permutation_equivariant((rows, cols, k, seed) in random_dictionary_case(), shuffle in any::<u64>()) {
        use rand::seq::SliceRandom;
        let dict = Dictionary::random_unit(rows, cols, seed);
        let y = target(rows, seed);
        let mut perm: Vec<usize> = (0..cols).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let permuted = dict.permuted(&perm);
        let a = brute_force_sparse(&dict, &y, k, &BruteForceOptions::default()).unwrap();
        let b = brute_force_sparse(&permuted, &y, k, &BruteForceOptions::default()).unwrap();
        prop_assert!((a.residual_norm - b.residual_norm).abs() < 1e-9);
        // b's support, mapped back to original columns, is also optimal.
        let back: Vec<usize> = b.support.iter().map(|&t| perm[t]).collect();
        let check = restricted_least_squares(&dict, &back, &y).unwrap();
        prop_assert!((check.residual_norm - a.residual_norm).abs() < 1e-9);
    }

    #[test]
    fn adding_a_column_never_hurts((rows, cols, k, seed) in random_dictionary_case(), extra in any::<usize>()) {
        let dict = Dictionary::random_unit(rows, cols, seed);
        let y = target(rows, seed);
        let base: Vec<usize> = (0..k).collect();
        let j = k + extra % (cols - k).max(1);
        if j >= cols { return Ok(()) }
        let mut grown = base.clone();
        grown.push(j);
        let r0 = restricted_least_squares(&dict, &base, &y).unwrap().residual_norm;
        let r1 = restricted_least_squares(&dict, &grown, &y).unwrap().residual_norm;
        prop_assert!(r1 <= r0 + 1e-9);
    }
}

#[test]
fn planted_helper_builds_every_kind() {
    for kind in [Kind::Two, Kind::Smooth(2), Kind::Smooth(4), Kind::Unique(2), Kind::Unique(4)] {
        for labels in 2..=4 {
            // The vector system needs at least as many layers as W labels.
            let expected = match kind {
                Kind::Two => true,
                Kind::Smooth(ell) | Kind::Unique(ell) => ell >= labels,
            };
            assert_eq!(planted(kind, 3, labels, 11).is_some(), expected, "{kind:?} with {labels} labels");
        }
    }
}
