//! Pairwise correlations of balanced n-qubit coherent-state superpositions.
//!
//! Total (T₂), quantum (D₂), classical (C₂) and the additivity defect (L₂) are
//! computed in closed form from the Fano-Bloch coefficients of two-qubit
//! reductions, with the Hilbert-Schmidt distance playing the role of the
//! linear relative entropy. The [`oracle`] module recomputes the same
//! quantities by direct numerical search so the closed forms can be audited.

#![forbid(unsafe_code)]

pub mod cli;
pub mod correlations;
pub mod error;
pub mod fano_bloch;
pub mod oracle;
pub mod states;

pub use correlations::{report, Branch, BranchForm, ClosestStates, CorrelationReport};
pub use error::{Error, Result};
pub use fano_bloch::{DensityMatrix4, FanoMatrix};
pub use states::{OverlapParam, PartitionSpec, PureSplit, TracedPair};
