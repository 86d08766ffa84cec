//! Local measurements with classical communication: the two-copy Bell
//! discrimination protocol and the distillation built on it.

mod protocol;
mod shot;

pub use protocol::{
    correction_unitary, discriminate_shots, discriminate_two_copies, distill, distill_exact_branches, distill_trivial,
    guess_from_parities, BranchAnalysis, DiscriminationReport, DistillationReport, OutcomeBranch, ShotRecord,
    TrivialReport, FIDELITY_TOL,
};
pub use shot::{Basis, ShotState, Transcript, TranscriptEntry};
