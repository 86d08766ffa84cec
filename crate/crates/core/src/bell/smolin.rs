use serde::Serialize;

use super::basis::{bell_ket_on, BellIndex};
use super::diagonal::rho_n_dense;
use crate::error::Result;
use crate::quantum::{dm_from_ensemble, trace_distance, DensityOperator, Ket, Party, Qubit};

/// Outcome of comparing the two-copy mixture with its regrouped form.
#[derive(Clone, Debug, Serialize)]
pub struct SmolinCheck {
    /// Trace distance between the two constructions.
    pub trace_distance: f64,
    /// Purity of Alice's factor in each regrouped term; 1 for product terms.
    pub alice_factor_purities: Vec<f64>,
    /// Purity of Bob's factor in each regrouped term.
    pub bob_factor_purities: Vec<f64>,
}

/// Term `i` of the regrouped form, `|Phi_i>_{A1A2} (x) |Phi_i>_{B1B2}`,
/// expressed in canonical `A1, B1, A2, B2` order.
pub fn regrouped_term(i: BellIndex) -> Result<Ket> {
    let alice = bell_ket_on(i, Qubit::of(Party::Alice, 1), Qubit::of(Party::Alice, 2))?;
    let bob = bell_ket_on(i, Qubit::of(Party::Bob, 1), Qubit::of(Party::Bob, 2))?;
    Ok(alice.tensor(&bob)?.to_canonical())
}

/// `1/4 sum_i |Phi_i><Phi_i|_{A1A2} (x) |Phi_i><Phi_i|_{B1B2}`, a mixture
/// of states that are product across `{A1,A2} : {B1,B2}`.
pub fn regrouped_two_copy() -> Result<DensityOperator> {
    let members = BellIndex::ALL
        .iter()
        .map(|&i| Ok((0.25, regrouped_term(i)?)))
        .collect::<Result<Vec<_>>>()?;
    dm_from_ensemble(&members)
}

/// Trace distance between the two-copy Bell mixture and its regrouped,
/// manifestly separable form, with the purity of every product factor.
pub fn smolin_flip_check() -> Result<SmolinCheck> {
    let rho2 = rho_n_dense(2)?;
    let flipped = regrouped_two_copy()?;
    let mut alice_factor_purities = Vec::new();
    let mut bob_factor_purities = Vec::new();
    for i in BellIndex::ALL {
        let term = regrouped_term(i)?;
        alice_factor_purities.push(term.reduced(&["A1", "A2"])?.purity());
        bob_factor_purities.push(term.reduced(&["B1", "B2"])?.purity());
    }
    Ok(SmolinCheck {
        trace_distance: trace_distance(&rho2, &flipped)?,
        alice_factor_purities,
        bob_factor_purities,
    })
}
