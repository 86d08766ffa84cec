//! Undoing per-copy Bell relabelings with local unitaries.

use serde::Serialize;

use super::diagonal::{rho_n, rho_n_dense, sigma_n, Representation};
use super::perm::{permutation_closure, Permutation};
use crate::error::{Error, Result};
use crate::quantum::trace_distance;

#[derive(Clone, Debug, Serialize)]
pub struct SigmaEquivalence {
    pub copies: usize,
    pub permutations: Vec<Permutation>,
    /// Per-copy correction words, each realizing the inverse relabeling.
    pub corrections: Vec<Vec<String>>,
    pub method: Representation,
    /// Trace distance (dense) or largest weight difference (structured)
    /// between the corrected state and the n-copy mixture.
    pub residual: f64,
}

/// Applies, on copy `j`, a local pair realizing `perms[j]^-1` to
/// `sigma_n(perms)` and compares the result with `rho_n`.
pub fn sigma_equivalence(perms: &[Permutation], method: Representation) -> Result<SigmaEquivalence> {
    let n = perms.len();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one permutation".into()));
    }
    let table = permutation_closure();
    let realizations = perms
        .iter()
        .map(|p| {
            table
                .get(&p.inverse())
                .cloned()
                .ok_or_else(|| Error::PermutationNotFound(p.inverse().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma = sigma_n(n, perms)?;

    let residual = match method {
        Representation::Structured => {
            let corrected =
                sigma.permute_copies(&realizations.iter().map(|r| r.permutation).collect::<Vec<_>>())?;
            let target = rho_n(n)?;
            corrected
                .weights()
                .keys()
                .chain(target.weights().keys())
                .map(|s| (corrected.weight(s) - target.weight(s)).abs())
                .fold(0.0, f64::max)
        }
        Representation::Dense => {
            let mut rho = sigma.to_dense()?;
            for (j, r) in realizations.iter().enumerate() {
                rho = r.pair.conjugate_copy(&rho, j + 1)?;
            }
            trace_distance(&rho, &rho_n_dense(n)?)?
        }
    };
    Ok(SigmaEquivalence {
        copies: n,
        permutations: perms.to_vec(),
        corrections: realizations.into_iter().map(|r| r.word).collect(),
        method,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms(s: &[&str]) -> Vec<Permutation> {
        s.iter().map(|p| p.parse().unwrap()).collect()
    }

    #[test]
    fn dense_correction_restores_mixture() {
        let r = sigma_equivalence(&perms(&["2134", "3412", "4321"]), Representation::Dense).unwrap();
        assert!(r.residual <= 1e-9, "{}", r.residual);
        assert_eq!(r.corrections.len(), 3);
    }

    #[test]
    fn structured_correction_is_exact() {
        let p = perms(&["2341", "1243", "4312", "1234", "3142", "2413", "4123", "1324"]);
        assert_eq!(sigma_equivalence(&p, Representation::Structured).unwrap().residual, 0.0);
    }

    #[test]
    fn uncorrected_state_differs() {
        let p = perms(&["1234", "2143"]);
        let sigma = sigma_n(2, &p).unwrap();
        assert_ne!(sigma, rho_n(2).unwrap());
    }
}
