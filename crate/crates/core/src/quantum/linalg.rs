use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors; column `k` belongs to `values[k]`.
    pub vectors: DMatrix<Complex64>,
}

impl HermitianEigen {
    /// Rebuilds `V diag(values) V†`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (k, &v) in self.values.iter().enumerate() {
            scaled.column_mut(k).scale_mut(v);
        }
        scaled * self.vectors.adjoint()
    }
}

/// Largest entry of `|H - H†|`.
pub fn hermitian_deviation(h: &DMatrix<Complex64>) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((h[(r, c)] - h[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
pub fn herm_eig(h: &DMatrix<Complex64>) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::InvalidArgument(format!(
            "expected a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn max_abs(m: &DMatrix<C>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_sorted_descending() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C::new(1.0, 0.0),
            C::new(2.0, 0.0),
        ]));
        let e = herm_eig(&h).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let h = DMatrix::from_row_slice(
            3,
            3,
            &[
                C::new(2.0, 0.0),
                C::new(0.5, 0.3),
                C::new(0.0, -1.0),
                C::new(0.5, -0.3),
                C::new(-1.0, 0.0),
                C::new(0.2, 0.0),
                C::new(0.0, 1.0),
                C::new(0.2, 0.0),
                C::new(0.7, 0.0),
            ],
        );
        let e = herm_eig(&h).unwrap();
        assert!(max_abs(&(e.reconstruct() - &h)) < 1e-9);
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!(max_abs(&(gram - DMatrix::identity(3, 3))) < 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = DMatrix::from_row_slice(2, 2, &[C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)]);
        assert!(matches!(herm_eig(&h), Err(Error::NotHermitian(_))));
    }
}
