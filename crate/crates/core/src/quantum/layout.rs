//! Qubit registers and bipartite cuts.
//!
//! Basis indices are big-endian over the layout: the first qubit in the
//! layout is the most significant bit. The canonical order for an n-copy
//! register is copy-major with Alice before Bob, i.e. `A1, B1, A2, B2, ...`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register handled by dense operators (4096-dimensional).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Largest register handled by state vectors.
pub const MAX_KET_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn prefix(self) -> &'static str {
        match self {
            Party::Alice => "A",
            Party::Bob => "B",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => f.write_str("alice"),
            Party::Bob => f.write_str("bob"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Qubit {
    pub label: String,
    pub owner: Party,
    pub copy: usize,
}

impl Qubit {
    pub fn new(label: impl Into<String>, owner: Party, copy: usize) -> Self {
        Self {
            label: label.into(),
            owner,
            copy,
        }
    }

    /// The conventional qubit of `owner` in copy `copy`, labelled `A<copy>` or `B<copy>`.
    pub fn of(owner: Party, copy: usize) -> Self {
        Self::new(format!("{}{}", owner.prefix(), copy), owner, copy)
    }
}

/// Ordered list of labelled qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Qubit>", into = "Vec<Qubit>")]
pub struct RegisterLayout {
    qubits: Vec<Qubit>,
}

impl TryFrom<Vec<Qubit>> for RegisterLayout {
    type Error = Error;

    fn try_from(qubits: Vec<Qubit>) -> Result<Self> {
        Self::new(qubits)
    }
}

impl From<RegisterLayout> for Vec<Qubit> {
    fn from(layout: RegisterLayout) -> Self {
        layout.qubits
    }
}

impl RegisterLayout {
    pub fn new(qubits: Vec<Qubit>) -> Result<Self> {
        let mut seen = HashSet::new();
        for q in &qubits {
            if !seen.insert(q.label.as_str()) {
                return Err(Error::DuplicateLabel(q.label.clone()));
            }
        }
        Ok(Self { qubits })
    }

    /// Canonical register for copies `first ..= first + count - 1`.
    pub fn copies(first: usize, count: usize) -> Self {
        let qubits = (first..first + count)
            .flat_map(|c| [Qubit::of(Party::Alice, c), Qubit::of(Party::Bob, c)])
            .collect();
        Self { qubits }
    }

    /// Canonical register `A1, B1, ..., An, Bn`.
    pub fn bell_pairs(n: usize) -> Self {
        Self::copies(1, n)
    }

    /// All qubits of one party for copies `1..=n`, e.g. `A1, A2, ..., An`.
    pub fn party(owner: Party, n: usize) -> Self {
        let qubits = (1..=n).map(|c| Qubit::of(owner, c)).collect();
        Self { qubits }
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    /// Hilbert-space dimension `2^len`.
    pub fn dim(&self) -> usize {
        1 << self.qubits.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.qubits.iter().map(|q| q.label.as_str())
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.qubits
            .iter()
            .position(|q| q.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l.as_ref())).collect()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.qubits.iter().any(|q| q.label == label)
    }

    /// Bit mask of the qubit at `position` within a basis index.
    pub fn bit(&self, position: usize) -> usize {
        1 << (self.qubits.len() - 1 - position)
    }

    pub fn mask<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        Ok(self
            .positions(labels)?
            .into_iter()
            .fold(0, |m, p| m | self.bit(p)))
    }

    /// Concatenation `self ++ other`; labels must not collide.
    pub fn concat(&self, other: &RegisterLayout) -> Result<Self> {
        let mut qubits = self.qubits.clone();
        qubits.extend(other.qubits.iter().cloned());
        Self::new(qubits)
    }

    /// Sub-layout keeping the given positions, in layout order.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Self {
            qubits: sorted.iter().map(|&p| self.qubits[p].clone()).collect(),
        }
    }

    /// Labels owned by `party`, in layout order.
    pub fn owned_by(&self, party: Party) -> Vec<String> {
        self.qubits
            .iter()
            .filter(|q| q.owner == party)
            .map(|q| q.label.clone())
            .collect()
    }

    /// The qubit of `party` in copy `copy`, if the layout holds exactly one.
    pub fn find(&self, party: Party, copy: usize) -> Result<&Qubit> {
        let mut hits = self
            .qubits
            .iter()
            .filter(|q| q.owner == party && q.copy == copy);
        match (hits.next(), hits.next()) {
            (Some(q), None) => Ok(q),
            _ => Err(Error::InvalidArgument(format!(
                "{party} does not own exactly one qubit of copy {copy}"
            ))),
        }
    }

    /// Same qubits sorted into canonical order (copy, then Alice before Bob).
    pub fn canonical(&self) -> Self {
        let mut qubits = self.qubits.clone();
        qubits.sort_by_key(|a| (a.copy, a.owner));
        Self { qubits }
    }

    pub fn same_labels(&self, other: &RegisterLayout) -> bool {
        self.len() == other.len() && other.labels().all(|l| self.contains(l))
    }

    pub fn check_dense(&self) -> Result<()> {
        check_dense_qubits(self.len())
    }
}

pub(crate) fn check_dense_qubits(qubits: usize) -> Result<()> {
    if qubits > MAX_DENSE_QUBITS {
        Err(Error::TooLarge {
            qubits,
            limit: MAX_DENSE_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// For each index of `target`, the index of `source` holding the same basis state.
///
/// Both layouts must carry the same label set.
pub(crate) fn index_map(source: &RegisterLayout, target: &RegisterLayout) -> Result<Vec<usize>> {
    if !source.same_labels(target) {
        return Err(Error::LayoutMismatch(
            "layouts do not carry the same qubits".into(),
        ));
    }
    let bits: Vec<(usize, usize)> = target
        .qubits()
        .iter()
        .enumerate()
        .map(|(tp, q)| Ok((target.bit(tp), source.bit(source.position(&q.label)?))))
        .collect::<Result<_>>()?;
    Ok((0..target.dim())
        .map(|t| {
            bits.iter()
                .filter(|(tb, _)| t & tb != 0)
                .fold(0, |s, (_, sb)| s | sb)
        })
        .collect())
}

/// Full-register index contribution of every sub-index over `positions`.
pub(crate) fn scatter_table(layout: &RegisterLayout, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|sub| {
            positions.iter().enumerate().fold(0, |acc, (i, &p)| {
                if sub & (1 << (k - 1 - i)) != 0 {
                    acc | layout.bit(p)
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Alice:Bob split of a register.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteCut {
    alice: Vec<String>,
    bob: Vec<String>,
}

impl BipartiteCut {
    /// Checks that the two sets are disjoint and together cover `layout`.
    pub fn new(layout: &RegisterLayout, alice: Vec<String>, bob: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for label in alice.iter().chain(bob.iter()) {
            if !layout.contains(label) {
                return Err(Error::UnknownLabel(label.clone()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "qubit `{label}` appears on both sides of the cut"
                )));
            }
        }
        if seen.len() != layout.len() {
            return Err(Error::InvalidArgument(
                "cut does not cover every qubit of the layout".into(),
            ));
        }
        Ok(Self { alice, bob })
    }

    /// The cut induced by qubit ownership.
    pub fn by_owner(layout: &RegisterLayout) -> Self {
        Self {
            alice: layout.owned_by(Party::Alice),
            bob: layout.owned_by(Party::Bob),
        }
    }

    pub fn alice(&self) -> &[String] {
        &self.alice
    }

    pub fn bob(&self) -> &[String] {
        &self.bob
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_pairs() {
        let l = RegisterLayout::bell_pairs(2);
        let labels: Vec<_> = l.labels().collect();
        assert_eq!(labels, ["A1", "B1", "A2", "B2"]);
        assert_eq!(l.dim(), 16);
        assert_eq!(l.bit(0), 8);
        assert_eq!(l.bit(3), 1);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let q = Qubit::of(Party::Alice, 1);
        assert!(matches!(
            RegisterLayout::new(vec![q.clone(), q]),
            Err(Error::DuplicateLabel(_))
        ));
        let l = RegisterLayout::bell_pairs(1);
        assert!(l.concat(&l).is_err());
    }

    #[test]
    fn canonical_sort_restores_order() {
        let flipped = RegisterLayout::party(Party::Alice, 2)
            .concat(&RegisterLayout::party(Party::Bob, 2))
            .unwrap();
        assert_eq!(flipped.canonical(), RegisterLayout::bell_pairs(2));
    }

    #[test]
    fn index_map_swaps_bits() {
        let ab = RegisterLayout::bell_pairs(1);
        let ba = RegisterLayout::new(vec![Qubit::of(Party::Bob, 1), Qubit::of(Party::Alice, 1)])
            .unwrap();
        // |A=0,B=1> is index 1 in `ab` and index 2 in `ba`
        let map = index_map(&ab, &ba).unwrap();
        assert_eq!(map, vec![0, 2, 1, 3]);
    }

    #[test]
    fn cut_validation() {
        let l = RegisterLayout::bell_pairs(1);
        assert!(BipartiteCut::new(&l, vec!["A1".into()], vec!["B1".into()]).is_ok());
        assert!(BipartiteCut::new(&l, vec!["A1".into()], vec![]).is_err());
        assert!(BipartiteCut::new(&l, vec!["A1".into()], vec!["A1".into(), "B1".into()]).is_err());
        assert!(BipartiteCut::new(&l, vec!["A9".into()], vec!["B1".into()]).is_err());
        let cut = BipartiteCut::by_owner(&RegisterLayout::bell_pairs(2));
        assert_eq!(cut.bob(), ["B1", "B2"]);
    }
}
