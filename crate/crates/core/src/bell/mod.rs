//! The Bell basis, Bell-diagonal n-copy states and the local-unitary
//! permutation group of the basis.

mod basis;
mod diagonal;
mod equivalence;
mod perm;
mod smolin;

pub use basis::{bell_ket, bell_ket_on, bell_ket_on_copy, BellIndex, BellString};
pub use diagonal::{
    bell_diagonal_kl, bell_diagonal_kl_product, maximally_mixed, rho2_power, rho2_power_dense, rho_n, rho_n_dense, sigma_n,
    support_leak, support_leak_product, rho2_power_product, BellDiagonalProduct, BellDiagonalState, Representation, BELL_WEIGHT_TOL,
};
pub(crate) use diagonal::relabel_copies;
pub use equivalence::{sigma_equivalence, SigmaEquivalence};
pub use perm::{
    gates, local_permutation_search, permutation_action, permutation_closure, LocalUnitaryPair,
    Permutation, PermutationAction, Realization, BELL_ALIGN_TOL, SEARCH_DEPTH,
};
pub use smolin::{regrouped_term, regrouped_two_copy, smolin_flip_check, SmolinCheck};
