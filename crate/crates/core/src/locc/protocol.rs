use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::shot::{Basis, ShotState, Transcript, TranscriptEntry};
use crate::bell::{
    bell_ket_on_copy, gates, rho_n_dense, smolin_flip_check, BellIndex, BellString,
    LocalUnitaryPair,
};
use crate::error::{Error, Result};
use crate::measures::{ppt_check, PptReport};
use crate::quantum::{
    trace_distance, von_neumann_entropy, BipartiteCut, DensityOperator, Party, RegisterLayout,
    MAX_DENSE_QUBITS,
};

/// Output copies count as Bell pairs when their fidelity is this close to 1.
pub const FIDELITY_TOL: f64 = 1e-12;

/// Measurement order of the two-copy protocol: (party, copy, basis,
/// communicated). Bob's bits go to Alice.
const DISCRIMINATION_STEPS: [(Party, usize, Basis, bool); 4] = [
    (Party::Alice, 1, Basis::Z, false),
    (Party::Bob, 1, Basis::Z, true),
    (Party::Alice, 2, Basis::X, false),
    (Party::Bob, 2, Basis::X, true),
];

/// `(0,0) -> 1, (0,1) -> 2, (1,0) -> 3, (1,1) -> 4` for (Z parity, X parity).
pub fn guess_from_parities(z_parity: u8, x_parity: u8) -> BellIndex {
    BellIndex::from_offset(usize::from(2 * (z_parity & 1) + (x_parity & 1)))
}

/// Alice-only Pauli taking `Phi_i` to `Phi_1` up to a global phase.
pub fn correction_unitary(i: BellIndex) -> LocalUnitaryPair {
    let alice = match i.get() {
        1 => gates::identity(),
        2 => gates::pauli_z(),
        3 => gates::pauli_x(),
        _ => gates::pauli_z() * gates::pauli_x(),
    };
    LocalUnitaryPair::new(alice, gates::identity()).expect("Pauli products are unitary")
}

/// Parities from the transcript alone: Alice's own outcome XOR Bob's
/// communicated one.
fn parities(t: &Transcript) -> Option<(u8, u8)> {
    let z = t.outcome(Party::Alice, 1, Basis::Z)? ^ t.outcome(Party::Bob, 1, Basis::Z)?;
    let x = t.outcome(Party::Alice, 2, Basis::X)? ^ t.outcome(Party::Bob, 2, Basis::X)?;
    Some((z, x))
}

/// Identifies the hidden Bell index from copies 1 and 2, consuming both.
pub fn discriminate_two_copies(
    shot: &mut ShotState,
    rng: &mut ChaCha8Rng,
) -> Result<(BellIndex, Transcript)> {
    if shot.remaining().len() < 2 || shot.is_consumed(1) || shot.is_consumed(2) {
        return Err(Error::InvalidArgument(
            "discrimination needs unconsumed copies 1 and 2".into(),
        ));
    }
    let mut t = Transcript::new();
    for (party, copy, basis, communicated) in DISCRIMINATION_STEPS {
        let outcome = shot.measure_local(party, copy, basis, rng)?;
        t.push(TranscriptEntry {
            party,
            copy,
            basis,
            outcome,
            communicated,
        });
    }
    shot.consume(1);
    shot.consume(2);
    let (z, x) = parities(&t).expect("all four outcomes recorded");
    Ok((guess_from_parities(z, x), t))
}

#[derive(Clone, Debug, Serialize)]
pub struct ShotRecord {
    pub shot: usize,
    pub hidden: BellIndex,
    pub guess: BellIndex,
    /// Alice Z, Bob Z, Alice X, Bob X.
    pub outcomes: [u8; 4],
    pub z_parity: u8,
    pub x_parity: u8,
    pub correct: bool,
    pub ebits: usize,
    /// Fidelity of all remaining copies with `Phi_1^{(x)(n-2)}`.
    pub fidelity: f64,
    pub min_copy_fidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistillationReport {
    pub n: usize,
    pub shots: usize,
    pub seed: u64,
    pub success_rate: f64,
    pub ebits_per_shot: f64,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub transcript_sample: Transcript,
    #[serde(skip)]
    pub records: Vec<ShotRecord>,
}

fn shot_rng(seed: u64, shot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng
}

fn corrected_fidelities(shot: &mut ShotState, guess: BellIndex) -> Result<(f64, f64)> {
    let fix = correction_unitary(guess);
    let remaining = shot.remaining();
    let mut ket = shot.ket().clone();
    for &c in &remaining {
        ket = fix.apply_to_copy(&ket, c)?;
    }
    shot.set_ket(ket);
    let first = remaining[0];
    let target = BellString::constant(BellIndex::PHI1, remaining.len()).ket(first);
    let joint = shot.ket().subsystem_fidelity(&target)?;
    let per_copy = remaining
        .iter()
        .map(|&c| shot.ket().subsystem_fidelity(&bell_ket_on_copy(BellIndex::PHI1, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok((joint, per_copy.into_iter().fold(1.0, f64::min)))
}

fn run_shot(n: usize, seed: u64, k: usize) -> Result<(ShotRecord, Transcript)> {
    let mut rng = shot_rng(seed, k);
    let mut shot = ShotState::sample(n, &mut rng)?;
    let (guess, transcript) = discriminate_two_copies(&mut shot, &mut rng)?;
    let (fidelity, min_copy_fidelity) = corrected_fidelities(&mut shot, guess)?;
    let e = transcript.entries();
    let outcomes = [e[0].outcome, e[1].outcome, e[2].outcome, e[3].outcome];
    let correct = guess == shot.hidden();
    let ebits = if correct && fidelity >= 1.0 - FIDELITY_TOL {
        n - 2
    } else {
        0
    };
    Ok((
        ShotRecord {
            shot: k,
            hidden: shot.hidden(),
            guess,
            outcomes,
            z_parity: outcomes[0] ^ outcomes[1],
            x_parity: outcomes[2] ^ outcomes[3],
            correct,
            ebits,
            fidelity,
            min_copy_fidelity,
        },
        transcript,
    ))
}

/// Discards copies 1 and 2 to learn the hidden index, then rotates every
/// remaining copy to `Phi_1`. Shot `k` draws from stream `k` of `seed`.
pub fn distill(n: usize, shots: usize, seed: u64) -> Result<DistillationReport> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "distillation needs n >= 3; n = {n} has no distillable entanglement (see the trivial-case report)"
        )));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let runs = (0..shots)
        .into_par_iter()
        .map(|k| run_shot(n, seed, k))
        .collect::<Result<Vec<_>>>()?;
    let transcript_sample = runs[0].1.clone();
    let records: Vec<ShotRecord> = runs.into_iter().map(|(r, _)| r).collect();
    let count = shots as f64;
    Ok(DistillationReport {
        n,
        shots,
        seed,
        success_rate: records.iter().filter(|r| r.correct).count() as f64 / count,
        ebits_per_shot: records.iter().map(|r| r.ebits as f64).sum::<f64>() / count,
        mean_fidelity: records.iter().map(|r| r.fidelity).sum::<f64>() / count,
        min_fidelity: records.iter().map(|r| r.fidelity).fold(1.0, f64::min),
        transcript_sample,
        records,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminationReport {
    pub shots: usize,
    pub seed: u64,
    pub success_rate: f64,
    /// `confusion[hidden - 1][guess - 1]` shot counts.
    pub confusion: [[usize; 4]; 4],
    pub transcript_sample: Transcript,
}

/// Runs the two-copy protocol on `shots` uniformly drawn Bell pairs.
pub fn discriminate_shots(shots: usize, seed: u64) -> Result<DiscriminationReport> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let runs = (0..shots)
        .into_par_iter()
        .map(|k| {
            let mut rng = shot_rng(seed, k);
            let mut shot = ShotState::sample(2, &mut rng)?;
            let (guess, t) = discriminate_two_copies(&mut shot, &mut rng)?;
            Ok((shot.hidden(), guess, t))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut confusion = [[0usize; 4]; 4];
    for (h, g, _) in &runs {
        confusion[h.offset()][g.offset()] += 1;
    }
    let correct: usize = (0..4).map(|k| confusion[k][k]).sum();
    Ok(DiscriminationReport {
        shots,
        seed,
        success_rate: correct as f64 / shots as f64,
        confusion,
        transcript_sample: runs[0].2.clone(),
    })
}

/// Evidence that one or two copies carry no distillable entanglement.
#[derive(Clone, Debug, Serialize)]
pub struct TrivialReport {
    pub n: usize,
    pub ebits: usize,
    /// n = 1: distance of the mixture to `I/4`.
    pub trace_distance_to_maximally_mixed: Option<f64>,
    /// n = 2: partial transpose across `{A1,A2} : {B1,B2}`.
    pub ppt: Option<PptReport>,
    /// n = 2: distance to the regrouped product-form mixture.
    pub smolin_residual: Option<f64>,
}

pub fn distill_trivial(n: usize) -> Result<TrivialReport> {
    let rho = rho_n_dense(n)?;
    match n {
        1 => {
            let mixed = DensityOperator::maximally_mixed(RegisterLayout::bell_pairs(1))?;
            Ok(TrivialReport {
                n,
                ebits: 0,
                trace_distance_to_maximally_mixed: Some(trace_distance(&rho, &mixed)?),
                ppt: None,
                smolin_residual: None,
            })
        }
        2 => Ok(TrivialReport {
            n,
            ebits: 0,
            trace_distance_to_maximally_mixed: None,
            ppt: Some(ppt_check(&rho, &BipartiteCut::by_owner(rho.layout()))?),
            smolin_residual: Some(smolin_flip_check()?.trace_distance),
        }),
        _ => Err(Error::InvalidArgument(format!(
            "trivial case needs n in {{1, 2}}, got {n}"
        ))),
    }
}

/// One measurement record within a branch, with its exact probability.
#[derive(Clone, Debug, Serialize)]
pub struct OutcomeBranch {
    /// Alice Z, Bob Z, Alice X, Bob X.
    pub outcomes: [u8; 4],
    /// Probability conditional on the hidden index.
    pub probability: f64,
    pub guess: BellIndex,
    pub output_fidelity: f64,
    /// Entropy of Alice's marginal on every remaining copy.
    pub copy_entropies: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchAnalysis {
    pub hidden: BellIndex,
    pub probability: f64,
    pub outcomes: Vec<OutcomeBranch>,
    pub success_probability: f64,
    pub min_fidelity: f64,
}

impl BranchAnalysis {
    /// Joint distribution of the copy-1 Z outcomes, `[alice][bob]`.
    pub fn z_distribution(&self) -> [[f64; 2]; 2] {
        let mut d = [[0.0; 2]; 2];
        for o in &self.outcomes {
            d[o.outcomes[0] as usize][o.outcomes[1] as usize] += o.probability;
        }
        d
    }
}

/// Exact Born-rule enumeration of the protocol for each hidden index.
pub fn distill_exact_branches(n: usize) -> Result<Vec<BranchAnalysis>> {
    if n < 3 || 2 * n > MAX_DENSE_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "exact branch analysis needs 3 <= n <= {}",
            MAX_DENSE_QUBITS / 2
        )));
    }
    BellIndex::ALL
        .iter()
        .map(|&hidden| {
            let mut outcomes = Vec::new();
            for bits in 0..16u8 {
                let record = [(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1];
                let mut shot = ShotState::new(hidden, n)?;
                let mut probability = 1.0;
                for ((party, copy, basis, _), &b) in DISCRIMINATION_STEPS.iter().zip(&record) {
                    let [p0, p1] = shot.outcome_probabilities(*party, *copy, *basis)?;
                    let p = if b == 0 { p0 } else { p1 };
                    if p <= FIDELITY_TOL {
                        probability = 0.0;
                        break;
                    }
                    probability *= shot.project(*party, *copy, *basis, b)?;
                }
                if probability == 0.0 {
                    continue;
                }
                shot.consume(1);
                shot.consume(2);
                let guess = guess_from_parities(record[0] ^ record[1], record[2] ^ record[3]);
                let (output_fidelity, _) = corrected_fidelities(&mut shot, guess)?;
                let copy_entropies = shot
                    .remaining()
                    .iter()
                    .map(|&c| von_neumann_entropy(&shot.ket().reduced(&[format!("A{c}")])?))
                    .collect::<Result<Vec<_>>>()?;
                outcomes.push(OutcomeBranch {
                    outcomes: record,
                    probability,
                    guess,
                    output_fidelity,
                    copy_entropies,
                });
            }
            let success_probability = outcomes
                .iter()
                .filter(|o| o.guess == hidden)
                .map(|o| o.probability)
                .sum();
            let min_fidelity = outcomes
                .iter()
                .map(|o| o.output_fidelity)
                .fold(1.0, f64::min);
            Ok(BranchAnalysis {
                hidden,
                probability: 0.25,
                outcomes,
                success_probability,
                min_fidelity,
            })
        })
        .collect()
}
