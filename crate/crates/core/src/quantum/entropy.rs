//! Entropies and distances. All logarithms are base 2.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use super::state::{DensityOperator, Ket};
use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as zero.
pub const SPECTRAL_CUTOFF: f64 = 1e-10;

/// Weight of `rho` outside the support of `sigma` above which the
/// relative entropy is infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-9;

/// A divergence in bits that may be infinite.
///
/// Serialized as a JSON number, or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn finite(self) -> Option<f64> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Divergence::Infinite)
    }

    /// Lossy view as `f64`, mapping the infinite case to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn halved(self) -> Divergence {
        match self {
            Divergence::Finite(v) => Divergence::Finite(v / 2.0),
            Divergence::Infinite => Divergence::Infinite,
        }
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Finite(v) => write!(f, "{v}"),
            Divergence::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Divergence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Divergence::Finite(v) => s.serialize_f64(*v),
            Divergence::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Divergence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Divergence;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Divergence, E> {
                Ok(Divergence::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Divergence, E> {
                Ok(Divergence::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Divergence, E> {
                Ok(Divergence::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Divergence, E> {
                match v {
                    "inf" => Ok(Divergence::Infinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

fn same_register(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.layout() != b.layout() {
        return Err(Error::LayoutMismatch(
            "operands live on different registers".into(),
        ));
    }
    Ok(())
}

/// `-sum p log2 p` over the positive part of a spectrum.
pub(crate) fn shannon_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    -probs
        .into_iter()
        .filter(|&p| p > SPECTRAL_CUTOFF)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

/// `-Tr rho log2 rho`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(shannon_bits(rho.eigen()?.values))
}

/// `Tr rho (log2 rho - log2 sigma)`, infinite when the support of `rho`
/// leaks outside the support of `sigma`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Divergence> {
    same_register(rho, sigma)?;
    let rho_eig = rho.eigen()?;
    let sigma_eig = sigma.eigen()?;

    // <v_j| rho |v_j> for the eigenvectors of sigma
    let v = &sigma_eig.vectors;
    let rv = rho.matrix() * v;
    let weights: Vec<f64> = (0..v.ncols())
        .map(|j| v.column(j).dotc(&rv.column(j)).re)
        .collect();

    let mut leak = 0.0;
    let mut cross = 0.0;
    for (&mu, &w) in sigma_eig.values.iter().zip(&weights) {
        if mu > SPECTRAL_CUTOFF {
            cross += w * mu.log2();
        } else {
            leak += w;
        }
    }
    if leak > SUPPORT_LEAK_TOL {
        return Ok(Divergence::Infinite);
    }
    let neg_entropy = -shannon_bits(rho_eig.values);
    Ok(Divergence::Finite(neg_entropy - cross))
}

/// `<psi| rho |psi>`.
pub fn fidelity_pure(rho: &DensityOperator, psi: &Ket) -> Result<f64> {
    if rho.layout() != psi.layout() {
        return Err(Error::LayoutMismatch(
            "state and reference live on different registers".into(),
        ));
    }
    let a = psi.amplitudes();
    let f = a.dotc(&(rho.matrix() * a)).re;
    Ok(f.clamp(0.0, 1.0))
}

/// `1/2 ||rho - tau||_1`.
pub fn trace_distance(rho: &DensityOperator, tau: &DensityOperator) -> Result<f64> {
    same_register(rho, tau)?;
    let diff = rho.matrix() - tau.matrix();
    let eig = super::linalg::herm_eig(&diff)?;
    let d = 0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}
