use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{BellIndex, BellString};
use crate::error::{Error, Result};
use crate::quantum::{Ket, Party, MAX_KET_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// Eigenvector for `outcome` (X outcome 0 is `|+>`).
    pub fn vector(self, outcome: u8) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match (self, outcome) {
            (Basis::Z, 0) => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            (Basis::Z, _) => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            (Basis::X, 0) => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            (Basis::X, _) => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

/// One local measurement; `communicated` marks outcomes sent to the other
/// party.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub party: Party,
    pub copy: usize,
    pub basis: Basis,
    pub outcome: u8,
    pub communicated: bool,
}

/// Append-only record of the classical side of a protocol run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transcript(Vec<TranscriptEntry>);

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: TranscriptEntry) {
        self.0.push(entry);
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bits sent between the parties, in order.
    pub fn messages(&self) -> impl Iterator<Item = &TranscriptEntry> {
        self.0.iter().filter(|e| e.communicated)
    }

    /// The outcome `party` recorded on `copy` in `basis`, if any.
    pub fn outcome(&self, party: Party, copy: usize, basis: Basis) -> Option<u8> {
        self.0
            .iter()
            .find(|e| e.party == party && e.copy == copy && e.basis == basis)
            .map(|e| e.outcome)
    }
}

/// One protocol run on `|Phi_i>^{(x)n}` with the hidden index `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShotState {
    hidden: BellIndex,
    ket: Ket,
    consumed: BTreeSet<usize>,
}

impl ShotState {
    pub fn new(hidden: BellIndex, copies: usize) -> Result<Self> {
        if copies == 0 || 2 * copies > MAX_KET_QUBITS {
            return Err(Error::TooLarge {
                qubits: 2 * copies,
                limit: MAX_KET_QUBITS,
            });
        }
        Ok(Self {
            hidden,
            ket: BellString::constant(hidden, copies).ket(1),
            consumed: BTreeSet::new(),
        })
    }

    /// Draws the hidden index uniformly.
    pub fn sample<R: Rng + ?Sized>(copies: usize, rng: &mut R) -> Result<Self> {
        Self::new(BellIndex::from_offset(rng.random_range(0..4)), copies)
    }

    pub fn hidden(&self) -> BellIndex {
        self.hidden
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }

    pub fn copies(&self) -> usize {
        self.ket.layout().len() / 2
    }

    pub fn is_consumed(&self, copy: usize) -> bool {
        self.consumed.contains(&copy)
    }

    pub fn consume(&mut self, copy: usize) {
        self.consumed.insert(copy);
    }

    pub fn remaining(&self) -> Vec<usize> {
        (1..=self.copies())
            .filter(|c| !self.consumed.contains(c))
            .collect()
    }

    fn label(&self, party: Party, copy: usize) -> Result<String> {
        if self.consumed.contains(&copy) {
            return Err(Error::ConsumedCopy(copy));
        }
        Ok(self.ket.layout().find(party, copy)?.label.clone())
    }

    /// Born probabilities of outcomes 0 and 1.
    pub fn outcome_probabilities(&self, party: Party, copy: usize, basis: Basis) -> Result<[f64; 2]> {
        let label = self.label(party, copy)?;
        let p0 = self.ket.project_qubit(&label, basis.vector(0))?.1;
        let p1 = self.ket.project_qubit(&label, basis.vector(1))?.1;
        Ok([p0, p1])
    }

    /// Post-selects `outcome` and returns its Born probability.
    pub fn project(&mut self, party: Party, copy: usize, basis: Basis, outcome: u8) -> Result<f64> {
        let label = self.label(party, copy)?;
        let (amps, p) = self.ket.project_qubit(&label, basis.vector(outcome))?;
        if p <= 0.0 {
            return Err(Error::InvalidState(format!(
                "outcome {outcome} has zero probability"
            )));
        }
        self.ket = self.ket.with_amplitudes(amps)?;
        Ok(p)
    }

    /// Projective measurement of `party`'s qubit of `copy`.
    pub fn measure_local<R: Rng + ?Sized>(
        &mut self,
        party: Party,
        copy: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<u8> {
        let [p0, _] = self.outcome_probabilities(party, copy, basis)?;
        let outcome = u8::from(rng.random::<f64>() >= p0);
        self.project(party, copy, basis, outcome)?;
        Ok(outcome)
    }

    pub(crate) fn set_ket(&mut self, ket: Ket) {
        self.ket = ket;
    }
}
