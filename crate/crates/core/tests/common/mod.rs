//! Brute-force reference computations written independently of the library:
//! explicit Kronecker products, index-loop partial transposes and a direct
//! spectral formula for the relative entropy.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Bell vectors written out by hand, over `|00>, |01>, |10>, |11>`.
pub fn bell_vec(i: usize) -> DVector<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = match i {
        1 => [s, 0.0, 0.0, s],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, s, 0.0],
        4 => [0.0, s, -s, 0.0],
        _ => panic!("no Bell state {i}"),
    };
    DVector::from_iterator(4, v.into_iter().map(c))
}

pub fn kron_vec(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(a.len() * b.len(), |k, _| a[k / b.len()] * b[k % b.len()])
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    DMatrix::from_fn(ra * rb, ca * cb, |r, col| {
        a[(r / rb, col / cb)] * b[(r % rb, col % cb)]
    })
}

pub fn projector(v: &DVector<Complex64>) -> DMatrix<Complex64> {
    v * v.adjoint()
}

/// Density matrix of `sum_s w_s |Phi_{s_1}> ... |Phi_{s_n}>` in copy-major
/// order `A1 B1 A2 B2 ...`.
pub fn bell_diagonal_matrix(weights: &[(Vec<usize>, f64)]) -> DMatrix<Complex64> {
    let n = weights[0].0.len();
    let d = 1 << (2 * n);
    let mut m = DMatrix::zeros(d, d);
    for (s, w) in weights {
        let v = s[1..]
            .iter()
            .fold(bell_vec(s[0]), |acc, &i| kron_vec(&acc, &bell_vec(i)));
        m += projector(&v) * c(*w);
    }
    m
}

/// `1/4 sum_i |Phi_i><Phi_i|^{(x)n}`.
pub fn rho_n(n: usize) -> DMatrix<Complex64> {
    bell_diagonal_matrix(&(1..=4).map(|i| (vec![i; n], 0.25)).collect::<Vec<_>>())
}

/// Partial transpose of every qubit whose bit is set in `mask`, by index
/// loops over (row, column) pairs.
pub fn partial_transpose(m: &DMatrix<Complex64>, mask: usize) -> DMatrix<Complex64> {
    let d = m.nrows();
    DMatrix::from_fn(d, d, |r, col| {
        let swapped_r = (r & !mask) | (col & mask);
        let swapped_c = (col & !mask) | (r & mask);
        m[(swapped_r, swapped_c)]
    })
}

/// Bob's bits in a copy-major register of `n` pairs.
pub fn bob_mask(n: usize) -> usize {
    (0..n).map(|k| 1 << (2 * (n - 1 - k))).sum()
}

pub fn eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let e = nalgebra::SymmetricEigen::new(m.clone());
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// `Tr rho log2 rho - Tr rho log2 sigma`, or `None` if rho leaves the
/// support of sigma.
pub fn relative_entropy(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> Option<f64> {
    let (pr, _) = eigen(rho);
    let (ps, vs) = eigen(sigma);
    let neg_entropy: f64 = pr.iter().filter(|&&p| p > 1e-12).map(|p| p * p.log2()).sum();
    let mut cross = 0.0;
    for (j, &lam) in ps.iter().enumerate() {
        let v = vs.column(j);
        let weight = (v.adjoint() * rho * v)[(0, 0)].re;
        if lam > 1e-12 {
            cross += weight * lam.log2();
        } else if weight > 1e-9 {
            return None;
        }
    }
    Some(neg_entropy - cross)
}

pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    eigen(m).0.iter().map(|x| x.abs()).sum()
}

/// Classical relative entropy in bits over matched supports.
pub fn kl(p: &[f64], q: &[f64]) -> Option<f64> {
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return None;
            }
            total += a * (a / b).log2();
        }
    }
    Some(total)
}
