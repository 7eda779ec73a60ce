//! Invariants checked on randomly drawn inputs.

use entdist::bell::{enumerate_mc_blocks, mc_block_coherent_information, mc_state_from_block};
use entdist::bounds::{e_mp_block, hashing_lower, ppt_ree_isotropic, ppt_ree_werner, rains_werner};
use entdist::entropy::{coherent_information, log_negativity, relative_entropy, von_neumann_entropy};
use entdist::optimizer::{convex_hull_1d, CurvePoint};
use entdist::sdp::programs::trace_norm_sdp;
use entdist::sdp::SolverOptions;
use entdist::state::partial_trace;
use entdist::states::{ginibre, isotropic, random_density, random_mc_matrix, random_unitary, rng_from_seed, werner};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn partial_trace_keeps_unit_trace(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let rho = random_density(&[da, db], 1 + (seed as usize % (da * db)), &mut rng_from_seed(seed)).unwrap();
        for keep in [[0usize], [1]] {
            let red = partial_trace(&rho, &keep).unwrap();
            prop_assert!((red.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_within_log_dimension(seed in any::<u64>(), n in 2usize..7) {
        let rho = random_density(&[n], n, &mut rng_from_seed(seed)).unwrap();
        let s = von_neumann_entropy(&rho);
        prop_assert!(s >= -1e-12 && s <= (n as f64).log2() + 1e-12);
    }

    #[test]
    fn log_negativity_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density(&[2, 3], 3, &mut rng).unwrap();
        let u = random_unitary(2, &mut rng).kron(&random_unitary(3, &mut rng));
        let a = log_negativity(&rho).unwrap();
        let b = log_negativity(&rho.conjugate_by(&u).unwrap()).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    /// Achievable rates never exceed the log-negativity.
    #[test]
    fn hashing_below_log_negativity(seed in any::<u64>(), rank in 1usize..5) {
        let rho = random_density(&[2, 2], rank, &mut rng_from_seed(seed)).unwrap();
        prop_assert!(hashing_lower(&rho).unwrap() <= log_negativity(&rho).unwrap() + 1e-9);
    }

    #[test]
    fn rains_never_above_ppt_ree(d in 2usize..9, p in 0.0f64..=1.0) {
        prop_assert!(rains_werner(d, p).unwrap() <= ppt_ree_werner(d, p).unwrap() + 1e-9);
    }

    /// The closest PPT state to I_d(f) is I_d(1/d); likewise W_d(1/2) for Werner states.
    #[test]
    fn ppt_ree_matches_relative_entropy(d in 2usize..5, t in 0.0f64..=1.0) {
        let df = d as f64;
        let f = 1.0 / df + (1.0 - 1.0 / df) * t;
        let iso = relative_entropy(&isotropic(d, f).unwrap(), &isotropic(d, 1.0 / df).unwrap()).unwrap();
        prop_assert!((ppt_ree_isotropic(d, f).unwrap() - iso).abs() < 1e-8);
        let p = 0.5 + 0.5 * t;
        let wer = relative_entropy(&werner(d, p).unwrap(), &werner(d, 0.5).unwrap()).unwrap();
        prop_assert!((ppt_ree_werner(d, p).unwrap() - wer).abs() < 1e-8);
    }

    #[test]
    fn e_mp_is_linear_and_nonnegative(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = rng_from_seed(seed);
        let blocks = enumerate_mc_blocks(3).unwrap();
        let block = &blocks[seed as usize % blocks.len()];
        let alpha = random_mc_matrix(3, &mut rng).unwrap();
        let base = e_mp_block(block, &alpha, 0.0).unwrap();
        let at_p = e_mp_block(block, &alpha, p).unwrap();
        prop_assert!(at_p >= 0.0);
        prop_assert!((at_p - (1.0 - p) * base).abs() < 1e-12);
    }

    /// Closed-form coherent information agrees with direct entropies of the state.
    #[test]
    fn mc_coherent_information_matches_entropies(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let blocks = enumerate_mc_blocks(d).unwrap();
        let block = &blocks[seed as usize % blocks.len()];
        let alpha = random_mc_matrix(d, &mut rng).unwrap();
        let direct = coherent_information(&mc_state_from_block(block, &alpha).unwrap()).unwrap();
        let closed = mc_block_coherent_information(block, &alpha).unwrap();
        prop_assert!((direct - closed).abs() < 1e-9, "{direct} vs {closed}");
    }

    #[test]
    fn hull_is_convex_and_below_samples(values in proptest::collection::vec(0.0f64..2.0, 3..20)) {
        let n = values.len();
        let points: Vec<CurvePoint> =
            values.iter().enumerate().map(|(i, &v)| CurvePoint::exact(i as f64 / (n - 1) as f64, v)).collect();
        let hull = convex_hull_1d(&points).unwrap();
        prop_assert_eq!(hull.len(), n);
        for (h, p) in hull.iter().zip(&points) {
            prop_assert!(h.value <= p.value + 1e-12);
        }
        for w in hull.windows(3) {
            prop_assert!(w[0].value - 2.0 * w[1].value + w[2].value >= -1e-9);
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    /// Solver reports satisfy weak duality up to the reported gap.
    #[test]
    fn trace_norm_sdp_weak_duality(seed in any::<u64>(), n in 1usize..5) {
        let m = ginibre(n, n, &mut rng_from_seed(seed));
        let (value, report) = trace_norm_sdp(&m, &SolverOptions::default()).unwrap();
        let svd: f64 = entdist::entropy::trace_norm(&m);
        prop_assert!((value - svd).abs() < 1e-5);
        prop_assert!(report.gap >= 0.0);
        let scale = 1.0 + report.objective.abs() + report.dual_objective.abs();
        prop_assert!((report.objective - report.dual_objective).abs() <= report.gap * scale + 1e-12);
    }
}
