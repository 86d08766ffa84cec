mod common;

use bellcopies::bell::{bell_diagonal_kl, rho2_power, rho_n, rho_n_dense};
use bellcopies::measures::{
    log_negativity, ppt_check, random_separable_bell_diagonal, sample_separable,
};
use bellcopies::quantum::{relative_entropy, BipartiteCut, RegisterLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLES: u64 = 1000;

#[test]
fn random_separable_states_stay_away_from_the_two_copy_mixture() {
    let rho2 = rho_n_dense(2).unwrap();
    let cut = BipartiteCut::by_owner(&RegisterLayout::bell_pairs(2));
    let mut min = f64::INFINITY;
    for seed in 0..SAMPLES {
        let sigma = sample_separable(2, 16, seed).unwrap();
        let report = ppt_check(&sigma, &cut).unwrap();
        assert!(report.ppt, "seed {seed}: {}", report.min_eigenvalue);
        let s = relative_entropy(&rho2, &sigma).unwrap().to_f64();
        min = min.min(s);
    }
    eprintln!("min S(rho_2 || sigma) over {SAMPLES} samples: {min}");
    assert!(min > 1e-6);
}

#[test]
fn bell_diagonal_separable_candidates_respect_the_four_copy_bound() {
    let rho4 = rho_n(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut min = f64::INFINITY;
    for _ in 0..SAMPLES {
        let sigma = random_separable_bell_diagonal(4, 3, &mut rng).unwrap();
        let s = bell_diagonal_kl(&rho4, &sigma).unwrap().to_f64();
        min = min.min(s);
    }
    eprintln!("min S(rho_4 || sigma) over {SAMPLES} candidates: {min}");
    assert!(min >= 2.0 - 1e-6);
    // the product candidate itself sits exactly on the bound
    assert_eq!(bell_diagonal_kl(&rho4, &rho2_power(2).unwrap()).unwrap().to_f64(), 2.0);
}

#[test]
fn bell_diagonal_candidates_are_ppt_across_the_party_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let sigma = random_separable_bell_diagonal(4, 3, &mut rng)
            .unwrap()
            .to_dense()
            .unwrap();
        let pt = common::partial_transpose(sigma.matrix(), common::bob_mask(4));
        let min = common::eigen(&pt).0.into_iter().fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-10, "{min}");
    }
}

#[test]
fn three_copy_mixture_is_npt_with_at_least_one_ebit_of_negativity() {
    let rho3 = rho_n_dense(3).unwrap();
    let cut = BipartiteCut::by_owner(rho3.layout());
    let ln = log_negativity(&rho3, &cut).unwrap();
    let oracle = common::trace_norm(&common::partial_transpose(&common::rho_n(3), common::bob_mask(3))).log2();
    assert!((ln - oracle).abs() <= 1e-10);
    assert!(ln >= 1.0 - 1e-10, "{ln}");
    assert!(!ppt_check(&rho3, &cut).unwrap().ppt);
}
