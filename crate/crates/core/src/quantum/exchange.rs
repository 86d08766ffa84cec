//! JSON exchange format for vectors and matrices.
//!
//! Complex entries are `[re, im]` pairs; matrices are row-major (a list of
//! rows); the register layout travels with the data.
//!
//! ```json
//! {
//!   "kind": "density",
//!   "layout": [{"label": "A1", "owner": "alice", "copy": 1}, ...],
//!   "dim": 4,
//!   "data": [[[0.5, 0.0], [0.0, 0.0], ...], ...]
//! }
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::layout::RegisterLayout;
use super::state::{DensityOperator, Ket, Operator};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DumpKind {
    Ket,
    Density,
    Operator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorDump {
    pub kind: DumpKind,
    pub layout: RegisterLayout,
    pub dim: usize,
    pub data: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub kind: DumpKind,
    pub layout: RegisterLayout,
    pub dim: usize,
    pub data: Vec<Vec<Complex64>>,
}

impl From<&Ket> for VectorDump {
    fn from(psi: &Ket) -> Self {
        Self {
            kind: DumpKind::Ket,
            layout: psi.layout().clone(),
            dim: psi.layout().dim(),
            data: psi.amplitudes().iter().copied().collect(),
        }
    }
}

impl TryFrom<VectorDump> for Ket {
    type Error = Error;

    fn try_from(d: VectorDump) -> Result<Ket> {
        if d.kind != DumpKind::Ket || d.dim != d.data.len() {
            return Err(Error::InvalidArgument("not a ket dump".into()));
        }
        Ket::new(d.layout, DVector::from_vec(d.data))
    }
}

fn rows(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl MatrixDump {
    fn matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.data.len() != self.dim || self.data.iter().any(|r| r.len() != self.dim) {
            return Err(Error::InvalidArgument(format!(
                "matrix dump is not {0}x{0}",
                self.dim
            )));
        }
        Ok(DMatrix::from_fn(self.dim, self.dim, |r, c| self.data[r][c]))
    }
}

impl From<&DensityOperator> for MatrixDump {
    fn from(rho: &DensityOperator) -> Self {
        Self {
            kind: DumpKind::Density,
            layout: rho.layout().clone(),
            dim: rho.dim(),
            data: rows(rho.matrix()),
        }
    }
}

impl From<&Operator> for MatrixDump {
    fn from(op: &Operator) -> Self {
        Self {
            kind: DumpKind::Operator,
            layout: op.layout().clone(),
            dim: op.layout().dim(),
            data: rows(op.matrix()),
        }
    }
}

impl TryFrom<MatrixDump> for DensityOperator {
    type Error = Error;

    fn try_from(d: MatrixDump) -> Result<DensityOperator> {
        let m = d.matrix()?;
        DensityOperator::new(d.layout, m)
    }
}

impl TryFrom<MatrixDump> for Operator {
    type Error = Error;

    fn try_from(d: MatrixDump) -> Result<Operator> {
        let m = d.matrix()?;
        Operator::new(d.layout, m)
    }
}
