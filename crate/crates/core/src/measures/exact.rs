//! Relative entropy of the n-copy mixtures against the product candidates
//! built from the separable two-copy mixture.

use serde::Serialize;

use crate::bell::{
    bell_diagonal_kl, bell_diagonal_kl_product, maximally_mixed, relabel_copies,
    rho2_power_dense, rho2_power_product, rho_n, rho_n_dense, support_leak_product,
    BellDiagonalProduct, Representation,
};
use crate::error::{Error, Result};
use crate::quantum::{relative_entropy, Divergence};

/// Largest `m` for the dense even-copy computation (12 qubits).
pub const MAX_DENSE_EVEN_M: usize = 3;

/// Largest `m` for the dense doubled odd-copy computation (12 qubits).
pub const MAX_DENSE_ODD_M: usize = 1;

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidArgument(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// `S(rho_{2m} || rho_2^{(x)m})`; the closed form is `2m - 2`.
pub fn even_candidate_bound(m: usize, method: Representation) -> Result<Divergence> {
    positive("m", m)?;
    match method {
        Representation::Structured => bell_diagonal_kl_product(&rho_n(2 * m)?, &rho2_power_product(m)?),
        Representation::Dense => {
            if m > MAX_DENSE_EVEN_M {
                return Err(Error::TooLarge {
                    qubits: 4 * m,
                    limit: 4 * MAX_DENSE_EVEN_M,
                });
            }
            relative_entropy(&rho_n_dense(2 * m)?, &rho2_power_dense(m)?)
        }
    }
}

pub fn even_candidate_closed_form(m: usize) -> f64 {
    2.0 * m as f64 - 2.0
}

/// Two copies of the `(2m+1)`-copy mixture against `rho_2^{(x)(2m+1)}`.
#[derive(Clone, Debug, Serialize)]
pub struct OddPairBound {
    pub m: usize,
    pub copies: usize,
    pub value: Divergence,
    /// Half of `value`, the per-copy-block bound.
    pub halved: Divergence,
    /// Weight of the doubled state on strings the candidate does not support.
    pub support_leak: f64,
}

/// `S(rho_{2m+1}^{(x)2} || rho_2^{(x)(2m+1)})` with the pair blocks placed on
/// consecutive copies `(1,2), (3,4), ...` of the `4m+2`-copy register.
pub fn odd_doubled_bound(m: usize, method: Representation) -> Result<OddPairBound> {
    positive("m", m)?;
    let n = 2 * m + 1;
    let doubled = rho_n(n)?.tensor(&rho_n(n)?);
    let candidate = rho2_power_product(n)?;
    let leak = support_leak_product(&doubled, &candidate);
    let value = match method {
        Representation::Structured => bell_diagonal_kl_product(&doubled, &candidate)?,
        Representation::Dense => {
            if m > MAX_DENSE_ODD_M {
                return Err(Error::TooLarge {
                    qubits: 4 * n,
                    limit: 4 * (2 * MAX_DENSE_ODD_M + 1),
                });
            }
            let block = rho_n_dense(n)?;
            let doubled = block.tensor(&relabel_copies(&block, n)?)?;
            relative_entropy(&doubled, &rho2_power_dense(n)?)?
        }
    };
    Ok(OddPairBound {
        m,
        copies: n,
        value,
        halved: value.halved(),
        support_leak: leak,
    })
}

pub fn odd_doubled_closed_form(m: usize) -> f64 {
    4.0 * m as f64 - 2.0
}

/// `S(rho_n^{(x)2} || rho_2^{(x)n})`, structured.
pub fn doubled_candidate_bound(n: usize) -> Result<Divergence> {
    positive("n", n)?;
    let doubled = rho_n(n)?.tensor(&rho_n(n)?);
    bell_diagonal_kl_product(&doubled, &rho2_power_product(n)?)
}

pub fn doubled_candidate_closed_form(n: usize) -> f64 {
    2.0 * n as f64 - 4.0
}

/// Best product candidate for a single n-copy mixture: `rho_2^{(x)n/2}` for
/// even `n`, `rho_2^{(x)(n-1)/2} (x) I/4` for odd `n`. Returns the
/// candidate's description and `S(rho_n || candidate)`.
pub fn single_block_candidate(n: usize) -> Result<(String, Divergence)> {
    positive("n", n)?;
    let m = n / 2;
    let target = rho_n(n)?;
    if n.is_multiple_of(2) {
        Ok((format!("rho_2^(x){m}"), bell_diagonal_kl_product(&target, &rho2_power_product(m)?)?))
    } else if n == 1 {
        Ok(("I/4".into(), bell_diagonal_kl(&target, &maximally_mixed(1)?)?))
    } else {
        let mut blocks = rho2_power_product(m)?.blocks().to_vec();
        blocks.push(maximally_mixed(1)?);
        let cand = BellDiagonalProduct::new(blocks)?;
        Ok((format!("rho_2^(x){m} (x) I/4"), bell_diagonal_kl_product(&target, &cand)?))
    }
}
