//! Random separable states: product-state mixtures for dense checks and
//! certified-separable Bell-diagonal mixtures for structured checks.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::bell::{BellDiagonalState, BellIndex, BellString, Permutation};
use crate::error::{Error, Result};
use crate::quantum::{DensityOperator, Party, RegisterLayout, MAX_DENSE_QUBITS};

const NORM_TOL: f64 = 1e-12;

/// One term `w |a><a| (x) |b><b|` of a separable mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm {
    pub weight: f64,
    /// Alice's state on `A1..An`.
    pub alice: DVector<Complex64>,
    /// Bob's state on `B1..Bn`.
    pub bob: DVector<Complex64>,
}

/// A K-term mixture of product states across the Alice:Bob cut.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableAnsatz {
    copies: usize,
    terms: Vec<ProductTerm>,
}

/// Normalized complex-Gaussian vector, i.e. a Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let n = v.norm();
    v.unscale(n)
}

/// Uniform draw from the probability simplex.
pub fn random_simplex<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

impl SeparableAnsatz {
    pub fn new(copies: usize, terms: Vec<ProductTerm>) -> Result<Self> {
        if copies == 0 || 2 * copies > MAX_DENSE_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "separable ansatz needs 1..={} copies",
                MAX_DENSE_QUBITS / 2
            )));
        }
        if terms.is_empty() {
            return Err(Error::InvalidArgument("separable ansatz needs terms".into()));
        }
        let local_dim = 1 << copies;
        let mut total = 0.0;
        for t in &terms {
            if t.weight < 0.0 {
                return Err(Error::NegativeWeight(t.weight));
            }
            if t.alice.len() != local_dim || t.bob.len() != local_dim {
                return Err(Error::InvalidArgument(format!(
                    "local states must have dimension {local_dim}"
                )));
            }
            if (t.alice.norm_squared() - 1.0).abs() > NORM_TOL
                || (t.bob.norm_squared() - 1.0).abs() > NORM_TOL
            {
                return Err(Error::InvalidState("local state is not normalized".into()));
            }
            total += t.weight;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::WeightSum(total));
        }
        Ok(Self { copies, terms })
    }

    pub fn random<R: Rng + ?Sized>(copies: usize, k: usize, rng: &mut R) -> Result<Self> {
        let local_dim = 1 << copies;
        let weights = random_simplex(k, rng);
        let terms = weights
            .into_iter()
            .map(|weight| ProductTerm {
                weight,
                alice: random_pure_state(local_dim, rng),
                bob: random_pure_state(local_dim, rng),
            })
            .collect();
        Self::new(copies, terms)
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn to_density(&self) -> Result<DensityOperator> {
        let builder = ProductBuilder::new(self.copies)?;
        Ok(builder.mixture(
            self.terms
                .iter()
                .map(|t| (t.weight, t.alice.as_slice(), t.bob.as_slice())),
        ))
    }
}

/// Assembles `sum w |a (x) b><a (x) b|` directly in canonical qubit order.
pub(crate) struct ProductBuilder {
    layout: RegisterLayout,
    /// canonical index -> (alice index, bob index)
    split: Vec<(usize, usize)>,
}

impl ProductBuilder {
    pub(crate) fn new(copies: usize) -> Result<Self> {
        let layout = RegisterLayout::bell_pairs(copies);
        layout.check_dense()?;
        let alice: Vec<usize> = layout
            .qubits()
            .iter()
            .enumerate()
            .filter(|(_, q)| q.owner == Party::Alice)
            .map(|(p, _)| p)
            .collect();
        let bob: Vec<usize> = layout
            .qubits()
            .iter()
            .enumerate()
            .filter(|(_, q)| q.owner == Party::Bob)
            .map(|(p, _)| p)
            .collect();
        let gather = |idx: usize, positions: &[usize]| {
            positions
                .iter()
                .fold(0, |acc, &p| (acc << 1) | usize::from(idx & layout.bit(p) != 0))
        };
        let split = (0..layout.dim())
            .map(|i| (gather(i, &alice), gather(i, &bob)))
            .collect();
        Ok(Self { layout, split })
    }

    pub(crate) fn product(&self, a: &[Complex64], b: &[Complex64]) -> DVector<Complex64> {
        DVector::from_iterator(self.split.len(), self.split.iter().map(|&(i, j)| a[i] * b[j]))
    }

    pub(crate) fn mixture<'a, I>(&self, terms: I) -> DensityOperator
    where
        I: IntoIterator<Item = (f64, &'a [Complex64], &'a [Complex64])>,
    {
        let d = self.layout.dim();
        let mut m = DMatrix::zeros(d, d);
        let one = Complex64::new(1.0, 0.0);
        for (w, a, b) in terms {
            let v = self.product(a, b);
            m.gerc(Complex64::new(w, 0.0), &v, &v, one);
        }
        DensityOperator::from_parts(self.layout.clone(), m)
    }
}

/// A reproducible random separable state on `copies` Bell pairs with `k`
/// product terms: Haar-random local pure states, uniform simplex weights.
pub fn sample_separable(copies: usize, k: usize, seed: u64) -> Result<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SeparableAnsatz::random(copies, k, &mut rng)?.to_density()
}

/// Single-copy Bell-diagonal weights with every entry at most 1/2, which is
/// exactly the separable set for one Bell-diagonal pair.
fn separable_single_copy<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let p = random_simplex(4, rng);
    let max = p.iter().copied().fold(0.0, f64::max);
    let t = if max <= 0.5 { 1.0 } else { 0.25 / (max - 0.25) };
    std::array::from_fn(|k| t * p[k] + (1.0 - t) * 0.25)
}

/// A random mixture of products of certified-separable Bell-diagonal blocks.
///
/// Each component pairs up a random subset of copies; a paired block is a
/// locally permuted copy of the two-copy uniform mixture (separable via its
/// regrouped form), every remaining copy gets Bell-diagonal weights bounded
/// by 1/2. With probability 1/2 a paired block uses the same permutation on
/// both copies, which reproduces the unpermuted two-copy mixture.
pub fn random_separable_bell_diagonal<R: Rng + ?Sized>(
    copies: usize,
    components: usize,
    rng: &mut R,
) -> Result<BellDiagonalState> {
    if copies == 0 || components == 0 {
        return Err(Error::InvalidArgument(
            "need at least one copy and one component".into(),
        ));
    }
    let mixture = random_simplex(components, rng);
    let perms = Permutation::all();
    let mut weights: BTreeMap<BellString, f64> = BTreeMap::new();

    for cw in mixture {
        let mut order: Vec<usize> = (0..copies).collect();
        order.shuffle(rng);
        // partial assignments: (positions -> index offsets, weight)
        let mut partial: Vec<(Vec<u8>, f64)> = vec![(vec![0; copies], 1.0)];
        let mut rest = order.as_slice();
        while !rest.is_empty() {
            if rest.len() >= 2 && rng.random_bool(0.5) {
                let (x, y) = (rest[0], rest[1]);
                rest = &rest[2..];
                let pa = *perms.choose(rng).expect("24 permutations");
                let pb = if rng.random_bool(0.5) {
                    pa
                } else {
                    *perms.choose(rng).expect("24 permutations")
                };
                partial = partial
                    .into_iter()
                    .flat_map(|(s, w)| {
                        BellIndex::ALL.into_iter().map(move |k| {
                            let mut s = s.clone();
                            s[x] = pa.apply(k).get();
                            s[y] = pb.apply(k).get();
                            (s, w * 0.25)
                        })
                    })
                    .collect();
            } else {
                let x = rest[0];
                rest = &rest[1..];
                let single = separable_single_copy(rng);
                partial = partial
                    .into_iter()
                    .flat_map(|(s, w)| {
                        BellIndex::ALL.into_iter().map(move |k| {
                            let mut s = s.clone();
                            s[x] = k.get();
                            (s, w * single[k.offset()])
                        })
                    })
                    .collect();
            }
        }
        for (s, w) in partial {
            let key = BellString::new(
                s.into_iter()
                    .map(|i| BellIndex::new(i).expect("assigned"))
                    .collect(),
            )?;
            *weights.entry(key).or_default() += cw * w;
        }
    }
    // renormalize away accumulated rounding
    let total: f64 = weights.values().sum();
    weights.values_mut().for_each(|w| *w /= total);
    BellDiagonalState::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ppt::ppt_check;
    use crate::quantum::BipartiteCut;

    #[test]
    fn single_term_is_pure_product() {
        let rho = sample_separable(2, 1, 3).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let cut = BipartiteCut::by_owner(rho.layout());
        assert!(ppt_check(&rho, &cut).unwrap().ppt);
        let alice = rho.partial_trace(&["A1", "A2"]).unwrap();
        assert!((alice.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn samples_are_valid_and_reproducible() {
        let a = sample_separable(2, 16, 11).unwrap();
        a.validate().unwrap();
        assert_eq!(a, sample_separable(2, 16, 11).unwrap());
        assert_ne!(a, sample_separable(2, 16, 12).unwrap());
    }

    #[test]
    fn ansatz_validation() {
        let v = DVector::from_element(2, Complex64::new(1.0, 0.0));
        let bad = ProductTerm {
            weight: 1.0,
            alice: v.clone(),
            bob: v,
        };
        assert!(SeparableAnsatz::new(1, vec![bad]).is_err());
        assert!(SeparableAnsatz::new(1, vec![]).is_err());
    }

    #[test]
    fn product_builder_matches_reordered_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_pure_state(4, &mut rng);
        let b = random_pure_state(4, &mut rng);
        let builder = ProductBuilder::new(2).unwrap();
        let direct = builder.product(a.as_slice(), b.as_slice());
        let ka = crate::quantum::Ket::new(RegisterLayout::party(Party::Alice, 2), a).unwrap();
        let kb = crate::quantum::Ket::new(RegisterLayout::party(Party::Bob, 2), b).unwrap();
        let via_layout = ka.tensor(&kb).unwrap().to_canonical();
        assert!((via_layout.amplitudes() - direct).norm() < 1e-15);
    }

    #[test]
    fn bell_diagonal_candidates_are_ppt() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let s = random_separable_bell_diagonal(2, 3, &mut rng).unwrap();
            let rho = s.to_dense().unwrap();
            let cut = BipartiteCut::by_owner(rho.layout());
            assert!(ppt_check(&rho, &cut).unwrap().ppt);
        }
    }

    #[test]
    fn single_copy_weights_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let w = separable_single_copy(&mut rng);
            assert!(w.iter().all(|&x| (0.0..=0.5 + 1e-15).contains(&x)));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
