use serde::Serialize;

use crate::error::Result;
use crate::quantum::{BipartiteCut, DensityOperator};

/// Smallest partial-transpose eigenvalue still counted as non-negative.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

/// Spectrum test of the partial transpose over Bob's side of `cut`.
pub fn ppt_check(rho: &DensityOperator, cut: &BipartiteCut) -> Result<PptReport> {
    let eig = rho.partial_transpose(cut.bob())?.eigen()?;
    let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
    Ok(PptReport {
        min_eigenvalue,
        ppt: min_eigenvalue >= -PPT_TOL,
    })
}

/// `log2 || rho^{T_B} ||_1`.
pub fn log_negativity(rho: &DensityOperator, cut: &BipartiteCut) -> Result<f64> {
    let eig = rho.partial_transpose(cut.bob())?.eigen()?;
    let trace_norm: f64 = eig.values.iter().map(|v| v.abs()).sum();
    Ok(trace_norm.log2().max(0.0))
}
