//! The balanced n-qubit coherent-state superposition and its two-qubit reductions.
//!
//! The n-qubit state is N(|ω,+⟩^{⊗n} + |ω,−⟩^{⊗n}) with single-qubit states
//! |ω,±⟩ = √ω|0⟩ ± √(1−ω)|1⟩. Everything is parameterized by the overlap
//! s = ⟨ω,+|ω,−⟩ = 2ω − 1 ∈ [0, 1].
//!
//! Two reductions are provided:
//! * [`PureSplit`]: the k | n−k cut, mapped onto two logical qubits through the
//!   Schmidt decomposition (a pure two-qubit state);
//! * [`TracedPair`]: two physical qubits after tracing out the other n−2
//!   (a rank-2 mixed state).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fano_bloch::FanoMatrix;

/// Overlap s ∈ [0, 1] between the two branch coherent states.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct OverlapParam(f64);

impl OverlapParam {
    pub fn new(s: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&s) {
            Ok(Self(s))
        } else {
            Err(Error::OverlapOutOfRange(s))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// ω = (1 + s)/2, the representative in [1/2, 1].
    pub fn omega(self) -> f64 {
        0.5 * (1.0 + self.0)
    }

    #[inline]
    pub(crate) fn pow(self, m: u32) -> f64 {
        // powi(0) is exactly 1, which keeps s^{n-2} exact at n = 2
        self.0.powi(m as i32)
    }
}

/// Result of converting ω to s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaConversion {
    pub overlap: OverlapParam,
    /// Set when ω < 1/2 was replaced by 1 − ω.
    pub reflected: bool,
}

/// s = 2ω − 1. Values ω ∈ [0, 1/2) describe the same family after ω → 1 − ω.
pub fn overlap_from_omega(omega: f64) -> Result<OmegaConversion> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::OmegaOutOfRange(omega));
    }
    let (w, reflected) = if omega < 0.5 {
        (1.0 - omega, true)
    } else {
        (omega, false)
    };
    Ok(OmegaConversion {
        overlap: OverlapParam::new((2.0 * w - 1.0).clamp(0.0, 1.0))?,
        reflected,
    })
}

/// The k | n−k bipartition, 1 ≤ k ≤ n−1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PureSplit {
    n: u32,
    k: u32,
}

impl PureSplit {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPartition(format!("n = {n} must be >= 2")));
        }
        if k < 1 || k > n - 1 {
            return Err(Error::InvalidPartition(format!(
                "k = {k} must satisfy 1 <= k <= n-1 = {}",
                n - 1
            )));
        }
        Ok(Self { n, k })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u32 {
        self.k
    }
}

/// Two qubits kept out of n ≥ 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TracedPair {
    n: u32,
}

impl TracedPair {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPartition(format!("n = {n} must be >= 2")));
        }
        Ok(Self { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum PartitionSpec {
    PureSplit { n: u32, k: u32 },
    TracedPair { n: u32 },
}

impl PartitionSpec {
    pub fn pure(n: u32, k: u32) -> Result<Self> {
        PureSplit::new(n, k).map(Into::into)
    }

    pub fn traced(n: u32) -> Result<Self> {
        TracedPair::new(n).map(Into::into)
    }

    pub fn n(self) -> u32 {
        match self {
            PartitionSpec::PureSplit { n, .. } | PartitionSpec::TracedPair { n } => n,
        }
    }

    pub fn k(self) -> Option<u32> {
        match self {
            PartitionSpec::PureSplit { k, .. } => Some(k),
            PartitionSpec::TracedPair { .. } => None,
        }
    }

    /// Coefficient table of the reduced two-qubit state.
    pub fn state(self, s: OverlapParam) -> FanoMatrix {
        match self {
            PartitionSpec::PureSplit { n, k } => pure_partition_fano(PureSplit { n, k }, s),
            PartitionSpec::TracedPair { n } => mixed_pair_fano(TracedPair { n }, s),
        }
    }
}

impl From<PureSplit> for PartitionSpec {
    fn from(p: PureSplit) -> Self {
        PartitionSpec::PureSplit { n: p.n, k: p.k }
    }
}

impl From<TracedPair> for PartitionSpec {
    fn from(p: TracedPair) -> Self {
        PartitionSpec::TracedPair { n: p.n }
    }
}

/// Schmidt weights of the k | n−k cut, λ₊ ≥ λ₋, λ₊ + λ₋ = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchmidtPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Weights of the rank-2 spectral form of the traced pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixedSpectrum {
    pub p_plus: f64,
    pub p_minus: f64,
}

/// (s^k + s^{n−k}) / (1 + sⁿ): the local polarization of the pure split.
fn pure_polarization(split: PureSplit, s: OverlapParam) -> f64 {
    (s.pow(split.k) + s.pow(split.n - split.k)) / (1.0 + s.pow(split.n))
}

pub fn schmidt_coefficients(split: PureSplit, s: OverlapParam) -> SchmidtPair {
    let d = pure_polarization(split, s);
    SchmidtPair {
        lambda_plus: 0.5 * (1.0 + d),
        lambda_minus: 0.5 * (1.0 - d),
    }
}

/// Coefficients of the pure k | n−k state on its two logical qubits.
pub fn pure_partition_fano(split: PureSplit, s: OverlapParam) -> FanoMatrix {
    let (n, k) = (split.n, split.k);
    let r30 = pure_polarization(split, s);
    let r11 = ((1.0 - s.pow(2 * k)) * (1.0 - s.pow(2 * (n - k)))).sqrt() / (1.0 + s.pow(n));
    FanoMatrix::maximally_mixed()
        .with(3, 0, r30)
        .with(0, 3, r30)
        .with(1, 1, r11)
        .with(2, 2, -r11)
        .with(3, 3, 1.0)
}

/// Coefficients of the two-qubit reduced state of the n-qubit superposition.
pub fn mixed_pair_fano(pair: TracedPair, s: OverlapParam) -> FanoMatrix {
    let n = pair.n;
    // 2N² = 1 / (1 + sⁿ)
    let two_norm_sq = 1.0 / (1.0 + s.pow(n));
    let s2 = s.pow(2);
    let r11 = two_norm_sq * (1.0 - s2);
    let r22 = -two_norm_sq * (1.0 - s2) * s.pow(n - 2);
    let r33 = two_norm_sq * (s2 + s.pow(n - 2));
    let r03 = two_norm_sq * (s.value() + s.pow(n - 1));
    FanoMatrix::maximally_mixed()
        .with(1, 1, r11)
        .with(2, 2, r22)
        .with(3, 3, r33)
        .with(0, 3, r03)
        .with(3, 0, r03)
}

/// p± = (1 ± s^{n−2})(1 ± s²) / (2(1 + sⁿ)).
pub fn mixed_pair_spectrum(pair: TracedPair, s: OverlapParam) -> MixedSpectrum {
    let n = pair.n;
    let denom = 2.0 * (1.0 + s.pow(n));
    let a = s.pow(n - 2);
    let b = s.pow(2);
    MixedSpectrum {
        p_plus: (1.0 + a) * (1.0 + b) / denom,
        p_minus: (1.0 - a) * (1.0 - b) / denom,
    }
}
