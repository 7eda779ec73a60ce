use entdist::bell::{
    bell_state, block_is_mc, dephase_mc, enumerate_mc_blocks, is_ssd, mc_computational_form, mc_normal_form, mc_state_from_block,
    ssd_violation, BellIndex, MCBlock, MCMatrix, SSD_TOL,
};
use entdist::entropy::{coherent_information, relative_entropy, reverse_coherent_information};
use entdist::states::{random_mc_matrix, stream_rng};
use entdist::Error;

#[test]
fn block_counts_for_small_d() {
    let counts: Vec<usize> = (2..=5).map(|d| enumerate_mc_blocks(d).unwrap().len()).collect();
    assert_eq!(counts, vec![6, 12, 28, 30]);
}

#[test]
fn last_d5_block_is_final_row() {
    let blocks = enumerate_mc_blocks(5).unwrap();
    assert_eq!(blocks.last().unwrap().linear_indices(), vec![21, 22, 23, 24, 25]);
}

#[test]
fn enumerated_blocks_pass_the_direct_ssd_test() {
    for d in 2..=4 {
        for block in enumerate_mc_blocks(d).unwrap() {
            assert!(is_ssd(&block.vectors(), d, d, SSD_TOL).unwrap(), "{:?}", block.linear_indices());
        }
    }
}

#[test]
fn non_block_triple_fails_both_tests() {
    // {1, 2, 4} is absent from the d = 3 list
    let pairs: Vec<(usize, usize)> =
        [1, 2, 4].iter().map(|&k| BellIndex::from_linear(3, k).unwrap()).map(|b| (b.n, b.m)).collect();
    assert!(!block_is_mc(3, &pairs).unwrap());
    let vectors: Vec<_> = pairs.iter().map(|&(n, m)| bell_state(3, n, m).unwrap()).collect();
    assert!(ssd_violation(&vectors, 3, 3).unwrap() > 1e-3);
    assert!(matches!(MCBlock::from_pairs(3, &pairs), Err(Error::NotMaximallyCorrelated(_))));
}

#[test]
fn more_labels_than_d_rejected() {
    let pairs = [(0, 0), (0, 1), (1, 0)];
    assert!(matches!(block_is_mc(2, &pairs), Err(Error::InvalidParameter(_))));
}

#[test]
fn linear_index_round_trip() {
    for d in 2..=5 {
        for k in 1..=d * d {
            assert_eq!(BellIndex::from_linear(d, k).unwrap().linear(), k);
        }
    }
}

#[test]
fn normal_form_state_is_locally_equivalent() {
    let blocks = enumerate_mc_blocks(3).unwrap();
    for (i, block) in blocks.iter().enumerate() {
        let mut rng = stream_rng(31, i as u64);
        let alpha = random_mc_matrix(3, &mut rng).unwrap();
        let omega = mc_state_from_block(block, &alpha).unwrap();
        let nf = mc_normal_form(block, &alpha).unwrap();
        let rotated = mc_computational_form(&nf.beta).conjugate_by(&nf.local_unitary()).unwrap();
        assert!(rotated.matrix().max_abs_diff(omega.matrix()) < 1e-10, "block {i}");
    }
}

#[test]
fn mc_identities_hold_on_computational_form() {
    let mut rng = stream_rng(5, 0);
    for _ in 0..10 {
        let beta = random_mc_matrix(4, &mut rng).unwrap();
        let omega = mc_computational_form(&beta);
        let fwd = coherent_information(&omega).unwrap();
        let bwd = reverse_coherent_information(&omega).unwrap();
        let rel = relative_entropy(&omega, &dephase_mc(&omega).unwrap()).unwrap();
        assert!((fwd - bwd).abs() < 1e-9 && (rel - fwd).abs() < 1e-9 && fwd >= -1e-9);
    }
}

#[test]
fn classical_coefficients_give_zero_information() {
    let beta = MCMatrix::from_real_diagonal(&[0.5, 0.3, 0.2]).unwrap();
    assert!(coherent_information(&mc_computational_form(&beta)).unwrap().abs() < 1e-12);
}
