mod common;

use std::collections::BTreeMap;

use bellcopies::bell::{
    local_permutation_search, permutation_action, permutation_closure, sigma_equivalence,
    Permutation, Representation,
};
use bellcopies::locc::{discriminate_shots, distill, distill_exact_branches, distill_trivial};
use bellcopies::measures::even_candidate_bound;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn every_bell_permutation_is_local() {
    let closure = permutation_closure();
    assert_eq!(closure.len(), 24);
    for (p, r) in &closure {
        assert_eq!(permutation_action(&r.pair).unwrap().permutation, *p);
    }
    let swap = local_permutation_search("2134".parse().unwrap()).unwrap();
    assert_eq!(swap.word, ["SS"]);
    // Phi_1 and Phi_2 exchange without phase; Phi_3 and Phi_4 pick up the same phase
    assert!((swap.phases[0] - swap.phases[1]).norm() < 1e-12);
    assert!((swap.phases[2] - swap.phases[3]).norm() < 1e-12);
}

fn random_lists(n: usize, count: usize, seed: u64) -> Vec<Vec<Permutation>> {
    let all = Permutation::all();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| *all.choose(&mut rng).unwrap()).collect())
        .collect()
}

#[test]
fn relabeled_mixtures_are_locally_equivalent_dense() {
    for perms in random_lists(3, 20, 11) {
        let r = sigma_equivalence(&perms, Representation::Dense).unwrap();
        assert!(r.residual <= 1e-9, "{perms:?}: {}", r.residual);
    }
}

#[test]
fn relabeled_mixtures_are_locally_equivalent_structured() {
    for perms in random_lists(8, 20, 12) {
        let r = sigma_equivalence(&perms, Representation::Structured).unwrap();
        assert_eq!(r.residual, 0.0, "{perms:?}");
    }
}

#[test]
fn discrimination_never_errs() {
    for seed in 0..5 {
        let r = discriminate_shots(2000, seed).unwrap();
        assert_eq!(r.success_rate, 1.0);
        for (h, row) in r.confusion.iter().enumerate() {
            for (g, &count) in row.iter().enumerate() {
                if h != g {
                    assert_eq!(count, 0);
                }
            }
        }
    }
}

#[test]
fn distillation_yields_n_minus_two() {
    for n in 3..=6 {
        let r = distill(n, 500, n as u64).unwrap();
        assert_eq!(r.success_rate, 1.0);
        assert_eq!(r.ebits_per_shot, n as f64 - 2.0);
        assert!(r.min_fidelity >= 1.0 - 1e-12);
        assert!(r.records.iter().all(|s| s.min_copy_fidelity >= 1.0 - 1e-12));
    }
}

#[test]
fn yield_meets_the_even_copy_bound() {
    for m in 2..=3 {
        let n = 2 * m;
        let bound = even_candidate_bound(m, Representation::Structured)
            .unwrap()
            .to_f64();
        let yield_ = distill(n, 100, 1).unwrap().ebits_per_shot;
        assert_eq!(yield_ / bound, 1.0);
    }
}

#[test]
fn shot_frequencies_match_exact_branches() {
    let shots = 10_000;
    let report = distill(3, shots, 99).unwrap();
    let mut counts: BTreeMap<(u8, [u8; 4]), usize> = BTreeMap::new();
    for s in &report.records {
        *counts.entry((s.hidden.get(), s.outcomes)).or_default() += 1;
    }
    let branches = distill_exact_branches(3).unwrap();
    let mut covered = 0;
    for b in &branches {
        for o in &b.outcomes {
            let p = b.probability * o.probability;
            let expected = p * shots as f64;
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            let seen = counts.get(&(b.hidden.get(), o.outcomes)).copied().unwrap_or(0);
            covered += seen;
            assert!(
                (seen as f64 - expected).abs() <= 3.0 * sigma,
                "branch {} outcomes {:?}: {seen} vs {expected}",
                b.hidden.get(),
                o.outcomes
            );
        }
    }
    // no shot produced an outcome the exact analysis rules out
    assert_eq!(covered, shots);
}

#[test]
fn zero_yield_cases_carry_evidence() {
    let one = distill_trivial(1).unwrap();
    assert_eq!(one.ebits, 0);
    assert!(one.trace_distance_to_maximally_mixed.unwrap() <= 1e-12);
    let two = distill_trivial(2).unwrap();
    assert!(two.ppt.unwrap().min_eigenvalue >= -1e-10);
    assert!(two.smolin_residual.unwrap() <= 1e-10);
    // independent check of the two-copy partial transpose
    let pt = common::partial_transpose(&common::rho_n(2), common::bob_mask(2));
    let min = common::eigen(&pt).0.into_iter().fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-10);
}
