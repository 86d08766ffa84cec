//! Dense finite-dimensional quantum states on labelled qubit registers.

mod entropy;
mod exchange;
mod layout;
mod linalg;
mod state;

pub use entropy::{
    fidelity_pure, relative_entropy, trace_distance, von_neumann_entropy, Divergence,
    SPECTRAL_CUTOFF, SUPPORT_LEAK_TOL,
};
pub(crate) use entropy::shannon_bits;
pub use exchange::{DumpKind, MatrixDump, VectorDump};
pub use layout::{BipartiteCut, Party, Qubit, RegisterLayout, MAX_DENSE_QUBITS, MAX_KET_QUBITS};
pub use linalg::{herm_eig, hermitian_deviation, HermitianEigen, HERMITIAN_TOL};
pub use state::{DensityOperator, Gate, Ket, Operator};

/// Kronecker product of two kets (free-function form of [`Ket::tensor`]).
pub fn ket_tensor(a: &Ket, b: &Ket) -> crate::Result<Ket> {
    a.tensor(b)
}

/// `sum_k w_k |psi_k><psi_k|`.
pub fn dm_from_ensemble(members: &[(f64, Ket)]) -> crate::Result<DensityOperator> {
    DensityOperator::from_ensemble(members)
}
