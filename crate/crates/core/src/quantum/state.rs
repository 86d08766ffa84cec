use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use super::layout::{
    check_dense_qubits, index_map, scatter_table, RegisterLayout, MAX_KET_QUBITS,
};
use super::linalg::{herm_eig, hermitian_deviation, HermitianEigen};
use crate::error::{Error, Result};

/// Norm tolerance for state vectors.
pub const KET_NORM_TOL: f64 = 1e-12;
/// Hermiticity tolerance for density operators.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted in a density operator.
pub const DENSITY_PSD_TOL: f64 = 1e-10;
/// Trace tolerance for density operators.
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
/// Tolerance on ensemble weights summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A 2x2 single-qubit unitary.
pub type Gate = Matrix2<Complex64>;

/// Normalized pure state on a register.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    layout: RegisterLayout,
    amps: DVector<Complex64>,
}

impl Ket {
    pub fn new(layout: RegisterLayout, amps: DVector<Complex64>) -> Result<Self> {
        if layout.len() > MAX_KET_QUBITS {
            return Err(Error::TooLarge {
                qubits: layout.len(),
                limit: MAX_KET_QUBITS,
            });
        }
        if amps.len() != layout.dim() {
            return Err(Error::LayoutMismatch(format!(
                "{} amplitudes for a {}-dimensional register",
                amps.len(),
                layout.dim()
            )));
        }
        let norm = amps.norm_squared();
        if (norm - 1.0).abs() > KET_NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { layout, amps })
    }

    /// Rescales `amps` to unit norm first.
    pub fn normalized(layout: RegisterLayout, mut amps: DVector<Complex64>) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amps.unscale_mut(norm);
        Self::new(layout, amps)
    }

    /// Computational basis state `|index>`.
    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        let mut amps = DVector::zeros(layout.dim());
        if index >= amps.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range"
            )));
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(layout, amps)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.norm_squared()
    }

    /// Kronecker product; the result's layout is `self` followed by `other`.
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let layout = self.layout.concat(&other.layout)?;
        if layout.len() > MAX_KET_QUBITS {
            return Err(Error::TooLarge {
                qubits: layout.len(),
                limit: MAX_KET_QUBITS,
            });
        }
        Ok(Ket {
            layout,
            amps: self.amps.kronecker(&other.amps),
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch("inner product of different registers".into()));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Same state expressed in the qubit order of `target`.
    pub fn reorder(&self, target: &RegisterLayout) -> Result<Ket> {
        let map = index_map(&self.layout, target)?;
        Ok(Ket {
            layout: target.clone(),
            amps: DVector::from_iterator(map.len(), map.iter().map(|&s| self.amps[s])),
        })
    }

    pub fn to_canonical(&self) -> Ket {
        self.reorder(&self.layout.canonical())
            .expect("canonical layout has the same qubits")
    }

    /// Applies `gate` to the qubit `label`.
    pub fn apply_gate(&self, label: &str, gate: &Gate) -> Result<Ket> {
        let bit = self.layout.bit(self.layout.position(label)?);
        let mut amps = self.amps.clone();
        for i0 in (0..amps.len()).filter(|i| i & bit == 0) {
            let (a0, a1) = (amps[i0], amps[i0 | bit]);
            amps[i0] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
            amps[i0 | bit] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
        }
        Ok(Ket {
            layout: self.layout.clone(),
            amps,
        })
    }

    /// Projects qubit `label` onto `basis_vector` without renormalizing.
    ///
    /// Returns the projected amplitudes and the Born probability.
    pub(crate) fn project_qubit(
        &self,
        label: &str,
        basis_vector: [Complex64; 2],
    ) -> Result<(DVector<Complex64>, f64)> {
        let bit = self.layout.bit(self.layout.position(label)?);
        let [v0, v1] = basis_vector;
        let mut amps = self.amps.clone();
        for i0 in (0..amps.len()).filter(|i| i & bit == 0) {
            let c = v0.conj() * amps[i0] + v1.conj() * amps[i0 | bit];
            amps[i0] = v0 * c;
            amps[i0 | bit] = v1 * c;
        }
        let p = amps.norm_squared();
        Ok((amps, p))
    }

    pub(crate) fn with_amplitudes(&self, amps: DVector<Complex64>) -> Result<Ket> {
        Ket::normalized(self.layout.clone(), amps)
    }

    /// Reduced density operator on `keep` (result in layout order).
    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityOperator> {
        let mut keep_pos = self.layout.positions(keep)?;
        keep_pos.sort_unstable();
        keep_pos.dedup();
        check_dense_qubits(keep_pos.len())?;
        let rest: Vec<usize> = (0..self.layout.len())
            .filter(|p| !keep_pos.contains(p))
            .collect();
        let kt = scatter_table(&self.layout, &keep_pos);
        let rt = scatter_table(&self.layout, &rest);
        let dk = kt.len();
        let mut m = DMatrix::zeros(dk, dk);
        for r in 0..dk {
            for c in r..dk {
                let v: Complex64 = rt
                    .iter()
                    .map(|&e| self.amps[kt[r] | e] * self.amps[kt[c] | e].conj())
                    .sum();
                m[(r, c)] = v;
                m[(c, r)] = v.conj();
            }
        }
        Ok(DensityOperator {
            layout: self.layout.select(&keep_pos),
            matrix: m,
        })
    }

    /// `<target| rho_S |target>` where `rho_S` is the reduced state of `self`
    /// on the qubits of `target`.
    pub fn subsystem_fidelity(&self, target: &Ket) -> Result<f64> {
        let tpos: Vec<usize> = target
            .layout
            .labels()
            .map(|l| self.layout.position(l))
            .collect::<Result<_>>()?;
        let rest: Vec<usize> = (0..self.layout.len())
            .filter(|p| !tpos.contains(p))
            .collect();
        let tt = scatter_table(&self.layout, &tpos);
        let rt = scatter_table(&self.layout, &rest);
        let f: f64 = rt
            .iter()
            .map(|&e| {
                tt.iter()
                    .zip(target.amps.iter())
                    .map(|(&t, phi)| phi.conj() * self.amps[t | e])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum();
        Ok(f.clamp(0.0, 1.0))
    }
}

/// Operator on a register that need not be a state (e.g. a partial transpose).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    layout: RegisterLayout,
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(layout: RegisterLayout, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_dense_qubits(layout.len())?;
        if matrix.nrows() != layout.dim() || matrix.ncols() != layout.dim() {
            return Err(Error::LayoutMismatch(format!(
                "{}x{} matrix for a {}-dimensional register",
                matrix.nrows(),
                matrix.ncols(),
                layout.dim()
            )));
        }
        Ok(Self { layout, matrix })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Transposes the tensor factors in `subset` only.
    pub fn partial_transpose<S: AsRef<str>>(&self, subset: &[S]) -> Result<Operator> {
        let mask = self.layout.mask(subset)?;
        let d = self.layout.dim();
        let mut out = DMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                let r2 = (r & !mask) | (c & mask);
                let c2 = (c & !mask) | (r & mask);
                out[(r2, c2)] = self.matrix[(r, c)];
            }
        }
        Ok(Operator {
            layout: self.layout.clone(),
            matrix: out,
        })
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        herm_eig(&self.matrix)
    }

    /// Checks the density-operator invariants and converts.
    pub fn into_density(self) -> Result<DensityOperator> {
        DensityOperator::new(self.layout, self.matrix)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator on a register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    layout: RegisterLayout,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validating constructor.
    pub fn new(layout: RegisterLayout, matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Operator::new(layout, matrix)?;
        let rho = DensityOperator {
            layout: op.layout,
            matrix: op.matrix,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Checks Hermiticity, trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let dev = hermitian_deviation(&self.matrix);
        if dev > DENSITY_HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = self.eigen()?.values.last().copied().unwrap_or(0.0);
        if min < -DENSITY_PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn pure(psi: &Ket) -> Result<Self> {
        check_dense_qubits(psi.layout.len())?;
        Ok(Self {
            layout: psi.layout.clone(),
            matrix: &psi.amps * psi.amps.adjoint(),
        })
    }

    /// `I / d` on `layout`.
    pub fn maximally_mixed(layout: RegisterLayout) -> Result<Self> {
        check_dense_qubits(layout.len())?;
        let d = layout.dim();
        Ok(Self {
            layout,
            matrix: DMatrix::identity(d, d).unscale(d as f64),
        })
    }

    /// `sum_k w_k |psi_k><psi_k|`.
    pub fn from_ensemble(members: &[(f64, Ket)]) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::InvalidArgument("empty ensemble".into()));
        };
        let layout = first.layout.clone();
        check_dense_qubits(layout.len())?;
        let mut total = 0.0;
        let mut matrix = DMatrix::zeros(layout.dim(), layout.dim());
        for (w, psi) in members {
            if *w < 0.0 {
                return Err(Error::NegativeWeight(*w));
            }
            if psi.layout != layout {
                return Err(Error::LayoutMismatch(
                    "ensemble members live on different registers".into(),
                ));
            }
            total += w;
            matrix.gerc(Complex64::new(*w, 0.0), &psi.amps, &psi.amps, Complex64::new(1.0, 0.0));
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum(total));
        }
        Ok(Self { layout, matrix })
    }

    pub(crate) fn from_parts(layout: RegisterLayout, matrix: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.dim());
        Self { layout, matrix }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn as_operator(&self) -> Operator {
        Operator {
            layout: self.layout.clone(),
            matrix: self.matrix.clone(),
        }
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        herm_eig(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let layout = self.layout.concat(&other.layout)?;
        check_dense_qubits(layout.len())?;
        Ok(Self {
            layout,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Traces out every qubit not in `keep`.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityOperator> {
        let mut keep_pos = self.layout.positions(keep)?;
        keep_pos.sort_unstable();
        keep_pos.dedup();
        let rest: Vec<usize> = (0..self.layout.len())
            .filter(|p| !keep_pos.contains(p))
            .collect();
        let kt = scatter_table(&self.layout, &keep_pos);
        let rt = scatter_table(&self.layout, &rest);
        let dk = kt.len();
        let m = DMatrix::from_fn(dk, dk, |r, c| {
            rt.iter().map(|&e| self.matrix[(kt[r] | e, kt[c] | e)]).sum()
        });
        Ok(Self {
            layout: self.layout.select(&keep_pos),
            matrix: m,
        })
    }

    pub fn partial_transpose<S: AsRef<str>>(&self, subset: &[S]) -> Result<Operator> {
        self.as_operator().partial_transpose(subset)
    }

    pub fn reorder(&self, target: &RegisterLayout) -> Result<DensityOperator> {
        let map = index_map(&self.layout, target)?;
        let d = map.len();
        Ok(Self {
            layout: target.clone(),
            matrix: DMatrix::from_fn(d, d, |r, c| self.matrix[(map[r], map[c])]),
        })
    }

    pub fn to_canonical(&self) -> DensityOperator {
        self.reorder(&self.layout.canonical())
            .expect("canonical layout has the same qubits")
    }

    /// `(G_q) rho (G_q)†` for a single-qubit gate on `label`.
    pub fn conjugate_gate(&self, label: &str, gate: &Gate) -> Result<DensityOperator> {
        let bit = self.layout.bit(self.layout.position(label)?);
        let d = self.dim();
        let mut m = self.matrix.clone();
        // rows: G * m
        for r0 in (0..d).filter(|r| r & bit == 0) {
            for c in 0..d {
                let (a0, a1) = (m[(r0, c)], m[(r0 | bit, c)]);
                m[(r0, c)] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
                m[(r0 | bit, c)] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
            }
        }
        // columns: m * G†
        for c0 in (0..d).filter(|c| c & bit == 0) {
            for r in 0..d {
                let (a0, a1) = (m[(r, c0)], m[(r, c0 | bit)]);
                m[(r, c0)] = a0 * gate[(0, 0)].conj() + a1 * gate[(0, 1)].conj();
                m[(r, c0 | bit)] = a0 * gate[(1, 0)].conj() + a1 * gate[(1, 1)].conj();
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            matrix: m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::layout::{Party, Qubit};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn qubit(label: &str) -> RegisterLayout {
        RegisterLayout::new(vec![Qubit::new(label, Party::Alice, 1)]).unwrap()
    }

    fn phi_plus() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(
            RegisterLayout::bell_pairs(1),
            DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]),
        )
        .unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = Ket::basis(qubit("a"), 0).unwrap();
        let b = Ket::basis(qubit("b"), 0).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.amplitudes().as_slice(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert!(a.tensor(&a).is_err());
    }

    #[test]
    fn ket_rejects_bad_norm() {
        let amps = DVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(Ket::new(qubit("a"), amps.clone()).is_err());
        assert!(Ket::normalized(qubit("a"), amps).is_ok());
    }

    #[test]
    fn ensemble_weights_checked() {
        let psi = phi_plus();
        assert!(matches!(
            DensityOperator::from_ensemble(&[(0.5, psi.clone())]),
            Err(Error::WeightSum(_))
        ));
        assert!(matches!(
            DensityOperator::from_ensemble(&[(1.5, psi.clone()), (-0.5, psi)]),
            Err(Error::NegativeWeight(_))
        ));
    }

    #[test]
    fn marginal_of_maximally_entangled_pair() {
        let rho = DensityOperator::pure(&phi_plus()).unwrap();
        let a = rho.partial_trace(&["A1"]).unwrap();
        let half = DMatrix::identity(2, 2).unscale(2.0);
        assert!((a.matrix() - half).norm() < 1e-15);
        assert!(rho.partial_trace(&["C1"]).is_err());
        let from_ket = phi_plus().reduced(&["B1"]).unwrap();
        assert!((from_ket.matrix() - DMatrix::identity(2, 2).unscale(2.0)).norm() < 1e-15);
    }

    #[test]
    fn product_marginal() {
        let a = DensityOperator::new(
            qubit("a"),
            DMatrix::from_row_slice(2, 2, &[c(0.7), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.3)]),
        )
        .unwrap();
        let b = DensityOperator::maximally_mixed(qubit("b")).unwrap();
        let ab = a.tensor(&b).unwrap();
        let back = ab.partial_trace(&["a"]).unwrap();
        assert!((back.matrix() - a.matrix()).norm() < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_projector() {
        let rho = DensityOperator::pure(&phi_plus()).unwrap();
        let pt = rho.partial_transpose(&["B1"]).unwrap();
        let e = pt.eigen().unwrap();
        assert!((e.values[3] + 0.5).abs() < 1e-12);
        let back = pt.partial_transpose(&["B1"]).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn reorder_round_trip() {
        let psi = phi_plus().tensor(&Ket::basis(qubit("x"), 1).unwrap()).unwrap();
        let target = RegisterLayout::new(psi.layout().qubits().iter().rev().cloned().collect()).unwrap();
        let moved = psi.reorder(&target).unwrap();
        assert_eq!(moved.reorder(psi.layout()).unwrap(), psi);
    }

    #[test]
    fn gate_conjugation_matches_ket_action() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let gate = Gate::new(c(h), c(h), c(h), c(-h));
        let psi = phi_plus();
        let direct = DensityOperator::pure(&psi.apply_gate("A1", &gate).unwrap()).unwrap();
        let conj = DensityOperator::pure(&psi).unwrap().conjugate_gate("A1", &gate).unwrap();
        assert!((direct.matrix() - conj.matrix()).norm() < 1e-14);
    }

    #[test]
    fn subsystem_fidelity_of_product() {
        let psi = phi_plus();
        let other = Ket::new(
            RegisterLayout::copies(2, 1),
            psi.amplitudes().clone(),
        )
        .unwrap();
        let joint = psi.tensor(&other).unwrap();
        assert!((joint.subsystem_fidelity(&psi).unwrap() - 1.0).abs() < 1e-15);
        let zero = Ket::basis(RegisterLayout::bell_pairs(1), 0).unwrap();
        assert!((joint.subsystem_fidelity(&zero).unwrap() - 0.5).abs() < 1e-15);
    }
}
