use entdist::entropy::{coherent_information, log_negativity, trace_norm};
use entdist::linalg::{c, ComplexMatrix, C64};
use entdist::sdp::programs::{adeg, antideg_overlap_eigen, antideg_overlap_max, dg, e_wd, trace_norm_sdp};
use entdist::sdp::{SolveStatus, SolverOptions};
use entdist::state::{max_entangled_vector, DensityMatrix};
use entdist::states::{horodecki_state, isotropic, random_density, random_pure_vector, random_unitary, rng_from_seed, werner};

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn local(rho: &DensityMatrix, u: &ComplexMatrix, v: &ComplexMatrix) -> DensityMatrix {
    rho.conjugate_by(&u.kron(v)).unwrap()
}

#[test]
fn trace_norm_matches_svd_on_random_matrices() {
    let mut rng = rng_from_seed(11);
    for k in 0..20 {
        let n = 2 + k % 5;
        let m = entdist::states::ginibre(n, n, &mut rng);
        let (v, rep) = trace_norm_sdp(&m, &opts()).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((v - trace_norm(&m)).abs() < 1e-5, "side {n}: {v} vs {}", trace_norm(&m));
    }
}

#[test]
fn trace_norm_closed_forms() {
    let (v, _) = trace_norm_sdp(&ComplexMatrix::identity(3), &opts()).unwrap();
    assert!((v - 3.0).abs() < 1e-5);
    let mut rng = rng_from_seed(2);
    let u = random_pure_vector(4, &mut rng);
    let (v, _) = trace_norm_sdp(&ComplexMatrix::projector(&u).scale_real(5.0), &opts()).unwrap();
    assert!((v - 5.0).abs() < 1e-5);
    let g = entdist::states::ginibre(9, 9, &mut rng);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    let (v, _) = trace_norm_sdp(&h, &opts()).unwrap();
    assert!((v - trace_norm(&h)).abs() < 1e-5);
}

#[test]
fn maximally_entangled_state_is_degradable() {
    let rho = isotropic(2, 1.0).unwrap();
    let r = dg(&rho, false, &opts()).unwrap();
    assert!(r.value < 1e-6, "{}", r.value);
}

#[test]
fn classically_correlated_state_is_degradable_and_antidegradable() {
    let m = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
    let rho = DensityMatrix::new(vec![2, 2], m).unwrap();
    assert!(dg(&rho, false, &opts()).unwrap().value < 1e-5);
    assert!(adeg(&rho, &opts()).unwrap().value < 1e-5);
}

#[test]
fn isotropic_below_threshold_is_antidegradable() {
    for f in [0.5, 0.6, 0.75] {
        let r = adeg(&isotropic(2, f).unwrap(), &opts()).unwrap();
        assert!(r.value <= 1e-5, "f={f}: {}", r.value);
        assert!(r.map.is_cp(1e-7) && r.map.tp_residual() <= 1e-7);
    }
    let r = dg(&isotropic(2, 0.6).unwrap(), false, &opts()).unwrap();
    assert!(r.value >= 0.0 && r.value <= 1.0);
}

#[test]
fn symmetric_separable_state_is_antidegradable() {
    let m = ComplexMatrix::from_real_diagonal(&[0.0, 0.5, 0.5, 0.0]);
    let rho = DensityMatrix::new(vec![2, 2], m).unwrap();
    assert!(adeg(&rho, &opts()).unwrap().value <= 1e-5);
}

#[test]
fn distances_are_local_unitary_invariant() {
    let mut rng = rng_from_seed(5);
    for _ in 0..3 {
        let rho = random_density(&[2, 2], 2, &mut rng).unwrap();
        let u = random_unitary(2, &mut rng);
        let v = random_unitary(2, &mut rng);
        let moved = local(&rho, &u, &v);
        let a = dg(&rho, false, &opts()).unwrap().value;
        let b = dg(&moved, false, &opts()).unwrap().value;
        assert!((a - b).abs() < 2e-6, "dg {a} vs {b}");
        let a = adeg(&rho, &opts()).unwrap().value;
        let b = adeg(&moved, &opts()).unwrap().value;
        assert!((a - b).abs() < 2e-6, "adeg {a} vs {b}");
    }
}

#[test]
fn qutrit_distances_solve() {
    let rho = isotropic(3, 0.9).unwrap();
    let r = dg(&rho, false, &opts()).unwrap();
    assert!(r.map.is_cp(1e-7) && r.map.tp_residual() <= 1e-7);
    let r = adeg(&rho, &opts()).unwrap();
    assert!(r.value > 0.0);
}

#[test]
fn wang_duan_values() {
    let bell = DensityMatrix::from_pure(vec![2, 2], &max_entangled_vector(2)).unwrap();
    let (e, rep) = e_wd(&bell, &opts()).unwrap();
    assert_eq!(rep.status, SolveStatus::Optimal);
    assert!((e - 1.0).abs() < 1e-4, "{e}");

    // PPT, so both the negativity and the Wang-Duan quantity vanish
    let h = horodecki_state(0.5).unwrap();
    let (e, _) = e_wd(&h, &opts()).unwrap();
    let en = log_negativity(&h).unwrap();
    assert!(en < 1e-9, "{en}");
    assert!(e >= 0.0 && e <= en + 1e-4, "{e} vs {en}");

    for p in [0.6, 0.75, 0.9] {
        let w = werner(2, p).unwrap();
        let (e, _) = e_wd(&w, &opts()).unwrap();
        let lo = coherent_information(&w).unwrap().max(0.0);
        let hi = log_negativity(&w).unwrap();
        assert!(e >= lo - 1e-4 && e <= hi + 1e-4, "p={p}: {lo} <= {e} <= {hi}");
    }
}

#[test]
fn antidegradable_overlap() {
    for d in [2usize, 3] {
        let exact = (1.0 + d as f64) / (2.0 * d as f64);
        let (v, _) = antideg_overlap_max(d, &opts()).unwrap();
        assert!((v - exact).abs() < 1e-4);
        assert!((v - antideg_overlap_eigen(d).unwrap()).abs() < 1e-5);
    }
}

#[test]
fn conjugate_flag_on_real_state_changes_nothing() {
    let psi: Vec<C64> = vec![c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.0)];
    let rho = DensityMatrix::from_pure(vec![2, 2], &psi).unwrap();
    let a = dg(&rho, false, &opts()).unwrap().value;
    let b = dg(&rho, true, &opts()).unwrap().value;
    assert!((a - b).abs() < 1e-6);
}
