//! Permutations of the Bell basis and the local unitaries that realize them.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::basis::BellIndex;
use crate::error::{Error, Result};
use crate::quantum::{DensityOperator, Gate, Ket, Party};

/// Tolerance for recognising an image as a Bell state up to phase.
pub const BELL_ALIGN_TOL: f64 = 1e-9;

/// Unitarity tolerance for [`LocalUnitaryPair`].
pub const UNITARY_TOL: f64 = 1e-12;

/// Maximum breadth-first depth of the permutation search.
pub const SEARCH_DEPTH: usize = 8;

/// Single-qubit gates used by the permutation search and corrections.
pub mod gates {
    use super::Gate;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn identity() -> Gate {
        Gate::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn pauli_x() -> Gate {
        Gate::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    pub fn pauli_z() -> Gate {
        Gate::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
    }

    /// `|0> -> |0>, |1> -> i|1>`.
    pub fn phase_s() -> Gate {
        Gate::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0))
    }

    pub fn hadamard() -> Gate {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Gate::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
    }
}

/// A bijection of `{1, 2, 3, 4}` in one-line notation: `"2134"` maps
/// 1 to 2, 2 to 1 and fixes 3 and 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation([u8; 4]);

impl Permutation {
    pub fn new(images: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if !(1..=4).contains(&i) || seen[usize::from(i - 1)] {
                return Err(Error::Permutation(format!("{images:?}")));
            }
            seen[usize::from(i - 1)] = true;
        }
        Ok(Self(images))
    }

    pub fn identity() -> Self {
        Self([1, 2, 3, 4])
    }

    pub fn apply(self, i: BellIndex) -> BellIndex {
        BellIndex::new(self.0[i.offset()]).expect("valid permutation")
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    /// `self` after `first`: `i -> self(first(i))`.
    pub fn after(self, first: Permutation) -> Permutation {
        Permutation(first.0.map(|i| self.0[usize::from(i - 1)]))
    }

    pub fn inverse(self) -> Permutation {
        let mut inv = [0u8; 4];
        for (k, &img) in self.0.iter().enumerate() {
            inv[usize::from(img - 1)] = k as u8 + 1;
        }
        Permutation(inv)
    }

    /// All 24 permutations in lexicographic order.
    pub fn all() -> Vec<Permutation> {
        let mut out = Vec::with_capacity(24);
        for a in 1..=4u8 {
            for b in (1..=4).filter(|&b| b != a) {
                for c in (1..=4).filter(|&c| c != a && c != b) {
                    let d = 10 - a - b - c;
                    out.push(Permutation([a, b, c, d]));
                }
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Permutation(s.to_string()))?;
        let images: [u8; 4] = digits
            .try_into()
            .map_err(|_| Error::Permutation(s.to_string()))?;
        Self::new(images).map_err(|_| Error::Permutation(s.to_string()))
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn is_unitary(g: &Gate) -> bool {
    (g.adjoint() * g - Gate::identity())
        .iter()
        .all(|z| z.norm() <= UNITARY_TOL)
}

/// `U_A (x) U_B`, one single-qubit unitary per party, acting on one copy.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitaryPair {
    alice: Gate,
    bob: Gate,
}

impl LocalUnitaryPair {
    pub fn new(alice: Gate, bob: Gate) -> Result<Self> {
        if !is_unitary(&alice) || !is_unitary(&bob) {
            return Err(Error::InvalidArgument("local gate is not unitary".into()));
        }
        Ok(Self { alice, bob })
    }

    pub fn identity() -> Self {
        Self {
            alice: gates::identity(),
            bob: gates::identity(),
        }
    }

    pub fn alice(&self) -> &Gate {
        &self.alice
    }

    pub fn bob(&self) -> &Gate {
        &self.bob
    }

    /// `next` applied after `self`.
    pub fn then(&self, next: &LocalUnitaryPair) -> LocalUnitaryPair {
        Self {
            alice: next.alice * self.alice,
            bob: next.bob * self.bob,
        }
    }

    /// `U_A (x) U_B` on the ordered pair (Alice, Bob).
    pub fn kron(&self) -> Matrix4<Complex64> {
        self.alice.kronecker(&self.bob)
    }

    pub fn gate(&self, party: Party) -> &Gate {
        match party {
            Party::Alice => &self.alice,
            Party::Bob => &self.bob,
        }
    }

    /// Applies the pair to copy `copy` (qubits `A<copy>`, `B<copy>`) of a ket.
    pub fn apply_to_copy(&self, psi: &Ket, copy: usize) -> Result<Ket> {
        let a = psi.layout().find(Party::Alice, copy)?.label.clone();
        let b = psi.layout().find(Party::Bob, copy)?.label.clone();
        psi.apply_gate(&a, &self.alice)?.apply_gate(&b, &self.bob)
    }

    /// `U rho U†` with the pair acting on copy `copy`.
    pub fn conjugate_copy(&self, rho: &DensityOperator, copy: usize) -> Result<DensityOperator> {
        let a = rho.layout().find(Party::Alice, copy)?.label.clone();
        let b = rho.layout().find(Party::Bob, copy)?.label.clone();
        rho.conjugate_gate(&a, &self.alice)?
            .conjugate_gate(&b, &self.bob)
    }
}

fn gate_rows(g: &Gate) -> [[[f64; 2]; 2]; 2] {
    let e = |r: usize, c: usize| [g[(r, c)].re, g[(r, c)].im];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

impl Serialize for LocalUnitaryPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LocalUnitaryPair", 2)?;
        st.serialize_field("alice", &gate_rows(&self.alice))?;
        st.serialize_field("bob", &gate_rows(&self.bob))?;
        st.end()
    }
}

/// How a local pair acts on the Bell basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermutationAction {
    pub permutation: Permutation,
    /// `(U_A (x) U_B)|Phi_i> = phases[i-1] |Phi_{pi(i)}>`.
    pub phases: [Complex64; 4],
}

/// The Bell permutation induced by `pair`, or `None` when some image is not
/// a Bell state up to phase.
pub fn permutation_action(pair: &LocalUnitaryPair) -> Option<PermutationAction> {
    let u = pair.kron();
    let mut images = [0u8; 4];
    let mut phases = [Complex64::new(0.0, 0.0); 4];
    for i in BellIndex::ALL {
        let v = nalgebra::Vector4::from(i.amplitudes());
        let img = u * v;
        let hit = BellIndex::ALL.iter().find_map(|&j| {
            let overlap = nalgebra::Vector4::from(j.amplitudes()).dotc(&img);
            ((overlap.norm() - 1.0).abs() <= BELL_ALIGN_TOL).then_some((j, overlap))
        })?;
        images[i.offset()] = hit.0.get();
        phases[i.offset()] = hit.1;
    }
    Some(PermutationAction {
        permutation: Permutation::new(images).ok()?,
        phases,
    })
}

/// A permutation together with a pair realizing it and the generator word
/// (left to right in application order) that produced the pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Realization {
    pub permutation: Permutation,
    pub word: Vec<String>,
    pub pair: LocalUnitaryPair,
    pub phases: [Complex64; 4],
}

fn generators() -> Vec<(String, LocalUnitaryPair)> {
    let singles = [
        ("I", gates::identity()),
        ("S", gates::phase_s()),
        ("Z", gates::pauli_z()),
        ("X", gates::pauli_x()),
        ("H", gates::hadamard()),
    ];
    let mut out = Vec::new();
    for (na, a) in &singles {
        for (nb, b) in &singles {
            if *na == "I" && *nb == "I" {
                continue;
            }
            out.push((format!("{na}{nb}"), LocalUnitaryPair { alice: *a, bob: *b }));
        }
    }
    out
}

/// Breadth-first closure from the identity pair, keyed by induced
/// permutation. Stops early once `target` (if any) is reached.
fn closure(target: Option<Permutation>) -> BTreeMap<Permutation, Realization> {
    let gens = generators();
    let mut found = BTreeMap::new();
    let start = Realization {
        permutation: Permutation::identity(),
        word: Vec::new(),
        pair: LocalUnitaryPair::identity(),
        phases: [Complex64::new(1.0, 0.0); 4],
    };
    found.insert(start.permutation, start.clone());
    if target == Some(start.permutation) {
        return found;
    }
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        if node.word.len() >= SEARCH_DEPTH {
            continue;
        }
        for (name, g) in &gens {
            let pair = node.pair.then(g);
            let Some(action) = permutation_action(&pair) else {
                continue;
            };
            if found.contains_key(&action.permutation) {
                continue;
            }
            let mut word = node.word.clone();
            word.push(name.clone());
            let r = Realization {
                permutation: action.permutation,
                word,
                pair,
                phases: action.phases,
            };
            found.insert(r.permutation, r.clone());
            if target == Some(r.permutation) {
                return found;
            }
            queue.push_back(r);
        }
    }
    found
}

/// Every Bell permutation reachable by local pairs, with a realization each.
pub fn permutation_closure() -> BTreeMap<Permutation, Realization> {
    closure(None)
}

/// Finds a local pair whose action on the Bell basis is `target`.
pub fn local_permutation_search(target: Permutation) -> Result<Realization> {
    closure(Some(target))
        .remove(&target)
        .ok_or_else(|| Error::PermutationNotFound(target.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_compose() {
        let p: Permutation = "2134".parse().unwrap();
        assert_eq!(p.apply(BellIndex::PHI1), BellIndex::PHI2);
        assert_eq!(p.after(p), Permutation::identity());
        let q: Permutation = "2341".parse().unwrap();
        assert_eq!(q.inverse().to_string(), "4123");
        assert_eq!(q.after(q.inverse()), Permutation::identity());
        assert!("1123".parse::<Permutation>().is_err());
        assert!("12345".parse::<Permutation>().is_err());
        assert!("12a4".parse::<Permutation>().is_err());
        assert_eq!(Permutation::all().len(), 24);
    }

    #[test]
    fn identity_action() {
        let a = permutation_action(&LocalUnitaryPair::identity()).unwrap();
        assert_eq!(a.permutation, Permutation::identity());
        assert!(a.phases.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn phase_gate_pair_swaps_first_two() {
        let s = gates::phase_s();
        let a = permutation_action(&LocalUnitaryPair::new(s, s).unwrap()).unwrap();
        assert_eq!(a.permutation.to_string(), "2134");
        // Phi3 and Phi4 pick up the common phase i
        let i = Complex64::new(0.0, 1.0);
        assert!((a.phases[2] - i).norm() < 1e-15);
        assert!((a.phases[3] - i).norm() < 1e-15);
    }

    #[test]
    fn one_sided_hadamard_not_aligned() {
        let p = LocalUnitaryPair::new(gates::hadamard(), gates::identity()).unwrap();
        assert!(permutation_action(&p).is_none());
        let p = LocalUnitaryPair::new(gates::phase_s(), gates::identity()).unwrap();
        assert!(permutation_action(&p).is_none());
    }

    #[test]
    fn non_unitary_rejected() {
        let g = Gate::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        assert!(LocalUnitaryPair::new(g, gates::identity()).is_err());
    }

    #[test]
    fn monomial_generators_alone_close_to_eight() {
        // phase and bit-flip gates preserve the {Phi1,Phi2}|{Phi3,Phi4} blocks
        let mut found = vec![Permutation::identity()];
        let mono = [gates::identity(), gates::phase_s(), gates::pauli_z(), gates::pauli_x()];
        let mut frontier = vec![LocalUnitaryPair::identity()];
        for _ in 0..SEARCH_DEPTH {
            let mut next = Vec::new();
            for p in &frontier {
                for a in &mono {
                    for b in &mono {
                        let q = p.then(&LocalUnitaryPair { alice: *a, bob: *b });
                        if let Some(act) = permutation_action(&q) {
                            if !found.contains(&act.permutation) {
                                found.push(act.permutation);
                                next.push(q);
                            }
                        }
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(found.len(), 8);
    }

    #[test]
    fn closure_reaches_all_24() {
        let all = permutation_closure();
        assert_eq!(all.len(), 24);
        for (perm, r) in &all {
            let act = permutation_action(&r.pair).unwrap();
            assert_eq!(act.permutation, *perm);
        }
    }

    #[test]
    fn search_finds_swap_with_phase_gates() {
        let r = local_permutation_search("2134".parse().unwrap()).unwrap();
        assert_eq!(r.word, vec!["SS".to_string()]);
        let id = local_permutation_search(Permutation::identity()).unwrap();
        assert_eq!(id.pair, LocalUnitaryPair::identity());
    }
}
