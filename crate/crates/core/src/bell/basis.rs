use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Ket, Party, Qubit, RegisterLayout};

/// Index of one of the four Bell states, `1..=4`.
///
/// ```text
/// 1: (|00> + |11>)/sqrt2    2: (|00> - |11>)/sqrt2
/// 3: (|01> + |10>)/sqrt2    4: (|01> - |10>)/sqrt2
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct BellIndex(u8);

impl BellIndex {
    pub const PHI1: BellIndex = BellIndex(1);
    pub const PHI2: BellIndex = BellIndex(2);
    pub const PHI3: BellIndex = BellIndex(3);
    pub const PHI4: BellIndex = BellIndex(4);
    pub const ALL: [BellIndex; 4] = [Self::PHI1, Self::PHI2, Self::PHI3, Self::PHI4];

    pub fn new(i: u8) -> Result<Self> {
        if (1..=4).contains(&i) {
            Ok(BellIndex(i))
        } else {
            Err(Error::BellIndex(i))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// `0..4`, for array indexing.
    pub fn offset(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn from_offset(k: usize) -> Self {
        assert!(k < 4, "Bell offset {k} out of range");
        BellIndex(k as u8 + 1)
    }

    /// Amplitudes over `|00>, |01>, |10>, |11>`.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (z, p, m) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
        );
        match self.0 {
            1 => [p, z, z, p],
            2 => [p, z, z, m],
            3 => [z, p, p, z],
            _ => [z, p, m, z],
        }
    }
}

impl TryFrom<u8> for BellIndex {
    type Error = Error;
    fn try_from(i: u8) -> Result<Self> {
        Self::new(i)
    }
}

impl From<BellIndex> for u8 {
    fn from(i: BellIndex) -> u8 {
        i.0
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A Bell state on two named qubits; the first is the more significant bit.
pub fn bell_ket_on(i: BellIndex, first: Qubit, second: Qubit) -> Result<Ket> {
    let layout = RegisterLayout::new(vec![first, second])?;
    Ket::new(layout, DVector::from_row_slice(&i.amplitudes()))
}

/// Bell state on copy `copy`, i.e. qubits `A<copy>, B<copy>`.
pub fn bell_ket_on_copy(i: BellIndex, copy: usize) -> Ket {
    bell_ket_on(i, Qubit::of(Party::Alice, copy), Qubit::of(Party::Bob, copy))
        .expect("A and B labels are distinct")
}

/// Bell state on the canonical pair `A1, B1`.
pub fn bell_ket(i: BellIndex) -> Ket {
    bell_ket_on_copy(i, 1)
}

/// One Bell index per copy, written like `"1134"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellString(Vec<BellIndex>);

impl BellString {
    pub fn new(indices: Vec<BellIndex>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("empty Bell string".into()));
        }
        Ok(Self(indices))
    }

    /// `(i, i, ..., i)` of length `n`.
    pub fn constant(i: BellIndex, n: usize) -> Self {
        assert!(n > 0, "Bell strings are non-empty");
        Self(vec![i; n])
    }

    /// Copy count.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> &[BellIndex] {
        &self.0
    }

    pub fn concat(&self, other: &BellString) -> BellString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    /// Enumerates `{1..4}^n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = BellString> {
        (0..4usize.pow(n as u32)).map(move |mut code| {
            let mut v = vec![BellIndex::PHI1; n];
            for slot in v.iter_mut().rev() {
                *slot = BellIndex::from_offset(code % 4);
                code /= 4;
            }
            BellString(v)
        })
    }

    /// `|Phi_{s1}> (x) ... (x) |Phi_{sn}>` on copies `first ..`, canonical order.
    pub fn ket(&self, first_copy: usize) -> Ket {
        let mut amps = DVector::from_element(1, Complex64::new(1.0, 0.0));
        for i in &self.0 {
            amps = amps.kronecker(&DVector::from_row_slice(&i.amplitudes()));
        }
        Ket::new(RegisterLayout::copies(first_copy, self.0.len()), amps)
            .expect("product of normalized Bell states")
    }
}

impl fmt::Display for BellString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for BellString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indices = s
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad Bell string `{s}`")))
                    .and_then(|d| BellIndex::new(d as u8))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_amplitudes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi1 = bell_ket(BellIndex::PHI1);
        let a: Vec<f64> = phi1.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(a, vec![s, 0.0, 0.0, s]);
        let phi4 = bell_ket(BellIndex::PHI4);
        let a: Vec<f64> = phi4.amplitudes().iter().map(|z| z.re).collect();
        assert_eq!(a, vec![0.0, s, -s, 0.0]);
    }

    #[test]
    fn orthonormal() {
        for i in BellIndex::ALL {
            for j in BellIndex::ALL {
                let ip = bell_ket(i).inner(&bell_ket(j)).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expected, 0.0)).norm() <= 1e-15);
            }
        }
    }

    #[test]
    fn index_range_checked() {
        assert!(BellIndex::new(0).is_err());
        assert!(BellIndex::new(5).is_err());
        assert!(serde_json::from_str::<BellIndex>("7").is_err());
    }

    #[test]
    fn string_parsing() {
        let s: BellString = "1134".parse().unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.to_string(), "1134");
        assert!("1150".parse::<BellString>().is_err());
        assert!("".parse::<BellString>().is_err());
        assert_eq!(BellString::all(2).count(), 16);
        assert_eq!(BellString::all(2).nth(5).unwrap().to_string(), "22");
    }

    #[test]
    fn string_ket_matches_tensor_fold() {
        let s: BellString = "14".parse().unwrap();
        let folded = bell_ket_on_copy(BellIndex::PHI1, 1)
            .tensor(&bell_ket_on_copy(BellIndex::PHI4, 2))
            .unwrap();
        assert_eq!(s.ket(1), folded);
    }

    #[test]
    fn two_copy_phi1_amplitudes() {
        let k = BellString::constant(BellIndex::PHI1, 2).ket(1);
        for (idx, a) in k.amplitudes().iter().enumerate() {
            let expected = if [0b0000, 0b0011, 0b1100, 0b1111].contains(&idx) { 0.5 } else { 0.0 };
            assert!((a.re - expected).abs() < 1e-15 && a.im == 0.0);
        }
    }
}
