//! Two-qubit operators in the Pauli tensor (Fano-Bloch) basis.
//!
//! A two-qubit operator is written
//!
//! ```text
//! ρ = ¼ Σ_{αβ} r[α][β] σ_α ⊗ σ_β,    r[α][β] = Tr(ρ σ_α ⊗ σ_β)
//! ```
//!
//! with σ₀ = I and the standard Pauli matrices (σ₂ has entries ∓i). Unit trace
//! is `r[0][0] = 1`. Because the Pauli tensors are orthogonal with
//! `Tr(σ_α⊗σ_β σ_γ⊗σ_δ) = 4 δ_αγ δ_βδ`, traces of products reduce to sums of
//! coefficient products, which is what every distance and purity here uses.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const UNIT_TRACE_TOL: f64 = 1e-12;
const HERMITIAN_INPUT_TOL: f64 = 1e-9;

/// Hermiticity, trace and positivity tolerances used by [`validate_density`].
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const NEGATIVITY_TOL: f64 = 1e-12;

/// Index of a single-qubit Pauli operator: 0 = identity, 1..=3 = σ₁, σ₂, σ₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub const I: PauliIndex = PauliIndex(0);
    pub const X: PauliIndex = PauliIndex(1);
    pub const Y: PauliIndex = PauliIndex(2);
    pub const Z: PauliIndex = PauliIndex(3);
    pub const ALL: [PauliIndex; 4] = [Self::I, Self::X, Self::Y, Self::Z];

    pub fn new(value: usize) -> Option<Self> {
        (value < 4).then_some(PauliIndex(value as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn matrix(self) -> Matrix2<C64> {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self.0 {
            0 => Matrix2::new(one, z, z, one),
            1 => Matrix2::new(z, one, one, z),
            2 => Matrix2::new(z, -i, i, z),
            _ => Matrix2::new(one, z, z, -one),
        }
    }
}

/// σ_α ⊗ σ_β in the product basis |00⟩, |01⟩, |10⟩, |11⟩.
pub fn pauli_product(alpha: PauliIndex, beta: PauliIndex) -> Matrix4<C64> {
    kron2(&alpha.matrix(), &beta.matrix())
}

pub(crate) fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|row, col| a[(row / 2, col / 2)] * b[(row % 2, col % 2)])
}

/// Real 4×4 coefficient table of a unit-trace two-qubit operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FanoMatrix {
    r: [[f64; 4]; 4],
}

impl FanoMatrix {
    /// Wraps a coefficient table, rejecting it unless `r[0][0] = 1`.
    pub fn new(r: [[f64; 4]; 4]) -> Result<Self> {
        if (r[0][0] - 1.0).abs() > UNIT_TRACE_TOL {
            return Err(Error::NotUnitTrace(r[0][0]));
        }
        Ok(Self::from_raw(r))
    }

    pub(crate) fn from_raw(r: [[f64; 4]; 4]) -> Self {
        Self { r }
    }

    /// Coefficients of I/4.
    pub fn maximally_mixed() -> Self {
        let mut r = [[0.0; 4]; 4];
        r[0][0] = 1.0;
        Self { r }
    }

    /// Returns a copy with `r[alpha][beta]` replaced.
    ///
    /// # Panics
    /// When asked to overwrite the trace coefficient `r[0][0]`.
    pub fn with(mut self, alpha: usize, beta: usize, value: f64) -> Self {
        assert!(
            (alpha, beta) != (0, 0),
            "r[0][0] is fixed to 1 by the unit-trace invariant"
        );
        self.r[alpha][beta] = value;
        self
    }

    pub fn coefficients(&self) -> &[[f64; 4]; 4] {
        &self.r
    }

    #[inline]
    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.r[alpha][beta]
    }

    pub fn coeff(&self, alpha: PauliIndex, beta: PauliIndex) -> f64 {
        self.r[alpha.index()][beta.index()]
    }

    /// Largest entrywise difference between two coefficient tables.
    pub fn max_abs_diff(&self, other: &FanoMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                worst = worst.max((self.r[a][b] - other.r[a][b]).abs());
            }
        }
        worst
    }

    /// Coefficient table with the two qubits exchanged (transpose).
    pub fn swapped(&self) -> FanoMatrix {
        let mut r = [[0.0; 4]; 4];
        for (a, row) in r.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = self.r[b][a];
            }
        }
        FanoMatrix { r }
    }

    pub fn to_density(&self) -> DensityMatrix4 {
        fano_to_density(self)
    }
}

/// A concrete 4×4 complex matrix in the computational product basis.
///
/// No invariant is enforced on construction; use [`validate_density`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix4 {
    m: Matrix4<C64>,
}

impl DensityMatrix4 {
    pub fn from_matrix(m: Matrix4<C64>) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Real part of Tr(self · other).
    pub fn trace_product(&self, other: &DensityMatrix4) -> f64 {
        (self.m * other.m).trace().re
    }

    /// Largest |m_ij − conj(m_ji)|.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let herm = (self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let mut vals = [0.0; 4];
        for (v, e) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
            *v = *e;
        }
        vals.sort_by(f64::total_cmp);
        vals
    }
}

/// Builds ¼ Σ r[α][β] σ_α⊗σ_β.
pub fn fano_to_density(f: &FanoMatrix) -> DensityMatrix4 {
    let mut m = Matrix4::<C64>::zeros();
    for a in PauliIndex::ALL {
        for b in PauliIndex::ALL {
            let c = f.coeff(a, b);
            if c != 0.0 {
                m += pauli_product(a, b) * C64::new(0.25 * c, 0.0);
            }
        }
    }
    DensityMatrix4 { m }
}

/// Recovers r[α][β] = Tr(d · σ_α⊗σ_β).
pub fn density_to_fano(d: &DensityMatrix4) -> Result<FanoMatrix> {
    let asym = d.hermitian_asymmetry();
    if asym > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(asym));
    }
    let mut r = [[0.0; 4]; 4];
    for a in PauliIndex::ALL {
        for b in PauliIndex::ALL {
            r[a.index()][b.index()] = (d.m * pauli_product(a, b)).trace().re;
        }
    }
    FanoMatrix::new(r)
}

/// Squared Hilbert-Schmidt distance ¼ Σ (a − b)².
pub fn hs_distance_sq(a: &FanoMatrix, b: &FanoMatrix) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let d = a.r[i][j] - b.r[i][j];
            sum += d * d;
        }
    }
    0.25 * sum
}

/// Tr ρ² = ¼ Σ r².
pub fn purity(f: &FanoMatrix) -> f64 {
    0.25 * f.r.iter().flatten().map(|v| v * v).sum::<f64>()
}

/// Linear entropy S₂(ρ) = 1 − Tr ρ².
pub fn linear_entropy(f: &FanoMatrix) -> f64 {
    1.0 - purity(f)
}

/// Antisymmetric part of the linear relative entropy: purity(a) − purity(b).
pub fn s_minus(a: &FanoMatrix, b: &FanoMatrix) -> f64 {
    purity(a) - purity(b)
}

/// Linear relative entropy Tr(A(A − B)) of two concrete matrices.
pub fn linear_relative_entropy(a: &DensityMatrix4, b: &DensityMatrix4) -> f64 {
    (a.m * (a.m - b.m)).trace().re
}

/// Symmetric part of the linear relative entropy, computed on matrices.
pub fn s_plus(a: &DensityMatrix4, b: &DensityMatrix4) -> f64 {
    linear_relative_entropy(a, b) + linear_relative_entropy(b, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Invariant {
    Hermiticity,
    Trace,
    Positivity,
}

/// One violated density-matrix invariant and the size of the violation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub invariant: Invariant,
    /// Asymmetry, |trace − 1| or −(smallest eigenvalue), depending on `invariant`.
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Validity {
    Ok,
    Violated(Vec<Violation>),
}

impl Validity {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validity::Ok)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Validity::Ok => &[],
            Validity::Violated(v) => v,
        }
    }
}

/// Checks Hermiticity, unit trace and positive semidefiniteness.
pub fn validate_density(d: &DensityMatrix4) -> Validity {
    let mut violations = Vec::new();
    let asym = d.hermitian_asymmetry();
    if asym > HERMITICITY_TOL {
        violations.push(Violation {
            invariant: Invariant::Hermiticity,
            magnitude: asym,
        });
    }
    let tr = d.trace();
    let trace_err = (tr - C64::new(1.0, 0.0)).norm();
    if trace_err > TRACE_TOL {
        violations.push(Violation {
            invariant: Invariant::Trace,
            magnitude: trace_err,
        });
    }
    let min_eig = d.eigenvalues()[0];
    if min_eig < -NEGATIVITY_TOL {
        violations.push(Violation {
            invariant: Invariant::Positivity,
            magnitude: -min_eig,
        });
    }
    if violations.is_empty() {
        Validity::Ok
    } else {
        Validity::Violated(violations)
    }
}
