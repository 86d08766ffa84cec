//! States diagonal in the n-fold Bell product basis, stored as a sparse
//! probability distribution over Bell strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::basis::{BellIndex, BellString};
use super::perm::Permutation;
use crate::error::{Error, Result};
use crate::quantum::{
    dm_from_ensemble, shannon_bits, DensityOperator, Divergence, Ket, RegisterLayout,
    MAX_DENSE_QUBITS,
};

/// Tolerance on the weights of a Bell-diagonal state summing to one.
pub const BELL_WEIGHT_TOL: f64 = 1e-12;

/// Which representation a state is built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Dense,
    Structured,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Dense => "dense",
            Representation::Structured => "structured",
        })
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Representation::Dense),
            "structured" | "bell-diagonal" => Ok(Representation::Structured),
            other => Err(Error::InvalidArgument(format!(
                "unknown representation `{other}` (expected dense or structured)"
            ))),
        }
    }
}

/// Serialized as a JSON object mapping Bell strings to weights,
/// e.g. `{"11": 0.25, "22": 0.25, "33": 0.25, "44": 0.25}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct BellDiagonalState {
    n: usize,
    weights: BTreeMap<BellString, f64>,
}

impl TryFrom<BTreeMap<String, f64>> for BellDiagonalState {
    type Error = Error;

    fn try_from(raw: BTreeMap<String, f64>) -> Result<Self> {
        let weights = raw
            .into_iter()
            .map(|(k, w)| Ok((k.parse::<BellString>()?, w)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new(weights)
    }
}

impl From<BellDiagonalState> for BTreeMap<String, f64> {
    fn from(s: BellDiagonalState) -> Self {
        s.weights
            .into_iter()
            .map(|(k, w)| (k.to_string(), w))
            .collect()
    }
}

fn dense_copies_ok(n: usize) -> Result<()> {
    if 2 * n > MAX_DENSE_QUBITS {
        Err(Error::TooLarge {
            qubits: 2 * n,
            limit: MAX_DENSE_QUBITS,
        })
    } else {
        Ok(())
    }
}

impl BellDiagonalState {
    /// Zero weights are dropped.
    pub fn new(weights: BTreeMap<BellString, f64>) -> Result<Self> {
        let n = weights
            .keys()
            .next()
            .map(BellString::len)
            .ok_or_else(|| Error::InvalidArgument("empty Bell-diagonal state".into()))?;
        let mut total = 0.0;
        for (s, &w) in &weights {
            if s.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "Bell string {s} has length {} but the state has {n} copies",
                    s.len()
                )));
            }
            // also rejects NaN
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(w >= 0.0) {
                return Err(Error::NegativeWeight(w));
            }
            total += w;
        }
        if (total - 1.0).abs() > BELL_WEIGHT_TOL {
            return Err(Error::WeightSum(total));
        }
        let weights = weights.into_iter().filter(|&(_, w)| w > 0.0).collect();
        Ok(Self { n, weights })
    }

    /// Uniform mixture over `strings` (duplicates collapse).
    pub fn uniform<I: IntoIterator<Item = BellString>>(strings: I) -> Result<Self> {
        let strings: std::collections::BTreeSet<_> = strings.into_iter().collect();
        let w = 1.0 / strings.len() as f64;
        Self::new(strings.into_iter().map(|s| (s, w)).collect())
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &BTreeMap<BellString, f64> {
        &self.weights
    }

    pub fn weight(&self, s: &BellString) -> f64 {
        self.weights.get(s).copied().unwrap_or(0.0)
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Shannon entropy of the weights, equal to the von Neumann entropy.
    pub fn entropy(&self) -> f64 {
        shannon_bits(self.weights.values().copied())
    }

    /// Product state: strings are concatenated, weights multiplied.
    pub fn tensor(&self, other: &BellDiagonalState) -> BellDiagonalState {
        let weights = self
            .weights
            .iter()
            .flat_map(|(a, wa)| {
                other
                    .weights
                    .iter()
                    .map(move |(b, wb)| (a.concat(b), wa * wb))
            })
            .collect();
        Self {
            n: self.n + other.n,
            weights,
        }
    }

    pub fn tensor_power(&self, k: usize) -> BellDiagonalState {
        assert!(k > 0, "tensor power must be positive");
        (1..k).fold(self.clone(), |acc, _| acc.tensor(self))
    }

    /// `p * self + (1 - p) * other`.
    pub fn mix(&self, p: f64, other: &BellDiagonalState) -> Result<BellDiagonalState> {
        if self.n != other.n {
            return Err(Error::InvalidArgument("mixing states of different copy counts".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0, 1]")));
        }
        let mut weights: BTreeMap<BellString, f64> = BTreeMap::new();
        for (s, w) in &self.weights {
            *weights.entry(s.clone()).or_default() += p * w;
        }
        for (s, w) in &other.weights {
            *weights.entry(s.clone()).or_default() += (1.0 - p) * w;
        }
        Self::new(weights)
    }

    /// Relabels copy `j` by `perms[j]`; the image of a local-unitary action.
    pub fn permute_copies(&self, perms: &[Permutation]) -> Result<BellDiagonalState> {
        if perms.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{} permutations for {} copies",
                perms.len(),
                self.n
            )));
        }
        let weights = self
            .weights
            .iter()
            .map(|(s, &w)| {
                let image = s
                    .indices()
                    .iter()
                    .zip(perms)
                    .map(|(&i, p)| p.apply(i))
                    .collect();
                (BellString::new(image).expect("non-empty"), w)
            })
            .collect();
        Ok(Self { n: self.n, weights })
    }

    /// Dense operator on copies `1..=n` in canonical order.
    pub fn to_dense(&self) -> Result<DensityOperator> {
        dense_copies_ok(self.n)?;
        let members: Vec<(f64, Ket)> = self
            .weights
            .iter()
            .map(|(s, &w)| (w, s.ket(1)))
            .collect();
        dm_from_ensemble(&members)
    }

    /// Projects a dense operator onto the Bell product basis, keeping the
    /// diagonal entries above `cutoff`.
    pub fn from_dense(rho: &DensityOperator, cutoff: f64) -> Result<BellDiagonalState> {
        let n = rho.layout().len() / 2;
        if rho.layout() != &RegisterLayout::bell_pairs(n) || rho.layout().len() != 2 * n {
            return Err(Error::LayoutMismatch(
                "Bell projection needs a canonical A1,B1,...,An,Bn register".into(),
            ));
        }
        let weights = BellString::all(n)
            .filter_map(|s| {
                let psi = s.ket(1);
                let a = psi.amplitudes();
                let w = a.dotc(&(rho.matrix() * a)).re;
                (w > cutoff).then_some((s, w))
            })
            .collect::<BTreeMap<_, _>>();
        let total: f64 = weights.values().sum();
        // off-diagonal parts of rho are discarded, so renormalize within tolerance only
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "operator is not Bell-diagonal (diagonal mass {total})"
            )));
        }
        let weights = weights.into_iter().map(|(s, w)| (s, w / total)).collect();
        Self::new(weights)
    }
}

/// Classical relative entropy `sum p log2(p/q)`; infinite when some string
/// with `p > 0` has `q = 0`.
pub fn bell_diagonal_kl(p: &BellDiagonalState, q: &BellDiagonalState) -> Result<Divergence> {
    if p.n != q.n {
        return Err(Error::InvalidArgument(format!(
            "Bell-diagonal states on {} and {} copies",
            p.n, q.n
        )));
    }
    let mut total = 0.0;
    for (s, &ps) in &p.weights {
        let qs = q.weight(s);
        if qs == 0.0 {
            return Ok(Divergence::Infinite);
        }
        total += ps * (ps / qs).log2();
    }
    Ok(Divergence::Finite(total))
}

/// Weight of `p` on strings that `q` does not support.
pub fn support_leak(p: &BellDiagonalState, q: &BellDiagonalState) -> f64 {
    p.weights
        .iter()
        .filter(|(s, _)| q.weight(s) == 0.0)
        .map(|(_, w)| w)
        .sum()
}

/// A tensor product of Bell-diagonal blocks on consecutive copies, kept
/// factored so that weights are looked up without enumerating the product.
#[derive(Clone, Debug, PartialEq)]
pub struct BellDiagonalProduct {
    blocks: Vec<BellDiagonalState>,
}

impl BellDiagonalProduct {
    pub fn new(blocks: Vec<BellDiagonalState>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("product needs at least one block".into()));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[BellDiagonalState] {
        &self.blocks
    }

    pub fn copies(&self) -> usize {
        self.blocks.iter().map(|b| b.n).sum()
    }

    pub fn weight(&self, s: &BellString) -> f64 {
        if s.len() != self.copies() {
            return 0.0;
        }
        let mut start = 0;
        let mut w = 1.0;
        for b in &self.blocks {
            let part = BellString::new(s.indices()[start..start + b.n].to_vec()).expect("non-empty");
            w *= b.weight(&part);
            if w == 0.0 {
                return 0.0;
            }
            start += b.n;
        }
        w
    }

    /// The full distribution; size grows as the product of block supports.
    pub fn expand(&self) -> BellDiagonalState {
        let mut it = self.blocks.iter();
        let first = it.next().expect("non-empty").clone();
        it.fold(first, |acc, b| acc.tensor(b))
    }
}

/// [`bell_diagonal_kl`] against a factored candidate, summing over the
/// support of `p` only.
pub fn bell_diagonal_kl_product(p: &BellDiagonalState, q: &BellDiagonalProduct) -> Result<Divergence> {
    if p.n != q.copies() {
        return Err(Error::InvalidArgument(format!(
            "Bell-diagonal states on {} and {} copies",
            p.n,
            q.copies()
        )));
    }
    let mut total = 0.0;
    for (s, &ps) in &p.weights {
        let qs = q.weight(s);
        if qs == 0.0 {
            return Ok(Divergence::Infinite);
        }
        total += ps * (ps / qs).log2();
    }
    Ok(Divergence::Finite(total))
}

/// [`support_leak`] against a factored candidate.
pub fn support_leak_product(p: &BellDiagonalState, q: &BellDiagonalProduct) -> f64 {
    p.weights
        .iter()
        .filter(|(s, _)| q.weight(s) == 0.0)
        .map(|(_, w)| w)
        .sum()
}

/// `rho_2^{(x)m}` kept as `m` two-copy blocks.
pub fn rho2_power_product(m: usize) -> Result<BellDiagonalProduct> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    BellDiagonalProduct::new(vec![rho_n(2)?; m])
}

/// `1/4 sum_i |Phi_i>^{(x)n} <Phi_i|^{(x)n}`: weight 1/4 on each constant string.
pub fn rho_n(n: usize) -> Result<BellDiagonalState> {
    if n == 0 {
        return Err(Error::InvalidArgument("copy count must be positive".into()));
    }
    BellDiagonalState::uniform(BellIndex::ALL.map(|i| BellString::constant(i, n)))
}

/// Dense `rho_n`, built directly from the ensemble of tensor-power kets.
pub fn rho_n_dense(n: usize) -> Result<DensityOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("copy count must be positive".into()));
    }
    dense_copies_ok(n)?;
    let members = BellIndex::ALL
        .iter()
        .map(|&i| {
            let psi = (2..=n).try_fold(super::bell_ket_on_copy(i, 1), |acc, c| {
                acc.tensor(&super::bell_ket_on_copy(i, c))
            })?;
            Ok((0.25, psi))
        })
        .collect::<Result<Vec<_>>>()?;
    dm_from_ensemble(&members)
}

/// `rho_2^{(x)m}`: weight `4^-m` on every pair-constant string
/// `(k1, k1, k2, k2, ..., km, km)`.
pub fn rho2_power(m: usize) -> Result<BellDiagonalState> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    Ok(rho_n(2)?.tensor_power(m))
}

/// Dense `rho_2^{(x)m}` as a Kronecker power of the dense two-copy state.
pub fn rho2_power_dense(m: usize) -> Result<DensityOperator> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    dense_copies_ok(2 * m)?;
    let base = rho_n_dense(2)?;
    let mut out = base.clone();
    for k in 1..m {
        let next = relabel_copies(&base, 2 * k)?;
        out = out.tensor(&next)?;
    }
    Ok(out)
}

/// Shifts every copy index of a canonical operator by `offset`.
pub(crate) fn relabel_copies(rho: &DensityOperator, offset: usize) -> Result<DensityOperator> {
    let n = rho.layout().len() / 2;
    let layout = RegisterLayout::copies(1 + offset, n);
    DensityOperator::new(layout, rho.matrix().clone())
}

/// `sigma_n`: weight 1/4 on `(pi_1(i), ..., pi_n(i))` for `i = 1..4`.
pub fn sigma_n(n: usize, perms: &[Permutation]) -> Result<BellDiagonalState> {
    if perms.len() != n {
        return Err(Error::InvalidArgument(format!(
            "sigma_n on {n} copies needs {n} permutations, got {}",
            perms.len()
        )));
    }
    rho_n(n)?.permute_copies(perms)
}

/// Maximally mixed n-copy state as a Bell-diagonal distribution.
pub fn maximally_mixed(n: usize) -> Result<BellDiagonalState> {
    if n == 0 {
        return Err(Error::InvalidArgument("copy count must be positive".into()));
    }
    BellDiagonalState::uniform(BellString::all(n))
}
