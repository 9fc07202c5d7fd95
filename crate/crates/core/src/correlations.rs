//! Closed-form pairwise correlations under the linear relative entropy.
//!
//! For a two-qubit state ρ with closest product state π, closest classical
//! state χ and χ's own closest product π_χ, the four measures are purity gaps:
//!
//! ```text
//! T₂ = P(ρ) − P(π)     D₂ = P(ρ) − P(χ)     C₂ = P(χ) − P(π_χ)     L₂ = P(π) − P(π_χ)
//! ```
//!
//! so T₂ − D₂ − C₂ + L₂ = 0 holds identically. Both reductions of the n-qubit
//! state share the coefficient pattern {r₃₀ = r₀₃, r₁₁, r₂₂, r₃₃}, so every
//! closest state is found in closed form:
//!
//! * π has local Bloch vectors (0, 0, c) on both sides, with c the real root of
//!   c³ + c(1 − r₃₃) − r₃₀ = 0 (a plain cube root for the pure split, where r₃₃ = 1);
//! * χ is either the σ₃-dephased state (minus branch, λ₁ ≤ λ₃) or the state
//!   measured along σ₁ on the first qubit (plus branch, λ₁ ≥ λ₃), where λ are
//!   the eigenvalues of K = xxᵀ + RRᵀ.
//!
//! C₂ and L₂ are signed; none of the values here are clamped.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fano_bloch::{purity, FanoMatrix};
use crate::states::{
    mixed_pair_fano, pure_partition_fano, schmidt_coefficients, OverlapParam, PartitionSpec,
    PureSplit, TracedPair,
};

/// Width of the band in which the two branches are reported as tied.
pub const BRANCH_EPS: f64 = 1e-12;

const CUBE_ROOT_FLOOR: f64 = 1e-300;
const STRUCTURE_TOL: f64 = 1e-12;
const DISCRIMINANT_FLOOR: f64 = -1e-15;
const CUBIC_RESIDUAL_TOL: f64 = 1e-13;

/// Which eigenvalue ordering of K holds for a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// λ₁ < λ₃: χ is diagonal in the σ₃ product basis.
    Minus,
    /// λ₁ > λ₃: χ is obtained by measuring σ₁ on the first qubit.
    Plus,
    /// |λ₁ − λ₃| within [`BRANCH_EPS`]; minus-form values are canonical.
    Tie,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Minus => "minus",
            Branch::Plus => "plus",
            Branch::Tie => "tie",
        }
    }

    /// Form whose closed expressions are reported for this branch.
    pub fn canonical_form(self) -> BranchForm {
        match self {
            Branch::Plus => BranchForm::Plus,
            Branch::Minus | Branch::Tie => BranchForm::Minus,
        }
    }

    fn from_margin(margin: f64) -> Self {
        if margin > BRANCH_EPS {
            Branch::Minus
        } else if margin < -BRANCH_EPS {
            Branch::Plus
        } else {
            Branch::Tie
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the two closed-form families for χ, independent of which one is optimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchForm {
    Minus,
    Plus,
}

/// Diagonal of K = xxᵀ + RRᵀ for the symmetric-parity pattern.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KSpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda_max: f64,
}

impl KSpectrum {
    pub fn sum(&self) -> f64 {
        self.lambda1 + self.lambda2 + self.lambda3
    }
}

/// Local polarization c (or a₃) of the symmetric closest product state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosestStateParam {
    pub value: f64,
    /// Cardano discriminant; only present for the cubic (traced-pair) route.
    pub delta: Option<f64>,
}

/// D₂, C₂, L₂ evaluated with one branch's closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchValues {
    pub form: BranchForm,
    pub d2: f64,
    pub c2: f64,
    pub l2: f64,
}

/// ρ together with its closest product, classical and classical-product states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosestStates {
    pub rho: FanoMatrix,
    pub product: FanoMatrix,
    pub classical: FanoMatrix,
    pub classical_product: FanoMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub partition: PartitionSpec,
    pub s: OverlapParam,
    pub t2: f64,
    pub d2: f64,
    pub c2: f64,
    pub l2: f64,
    pub branch: Branch,
    pub closest_param: ClosestStateParam,
    /// T₂ − D₂ − C₂ + L₂ as computed from the four values above.
    pub residual: f64,
    /// Plus-form values when `branch` is [`Branch::Tie`]; C₂ differs there.
    pub tie_alternate: Option<BranchValues>,
}

impl CorrelationReport {
    pub fn scheme_name(&self) -> &'static str {
        match self.partition {
            PartitionSpec::PureSplit { .. } => "pure",
            PartitionSpec::TracedPair { .. } => "mixed",
        }
    }
}

/// The five coefficients that can be non-zero for this state family.
#[derive(Clone, Copy, Debug)]
struct Pattern {
    r30: f64,
    r03: f64,
    r11: f64,
    r22: f64,
    r33: f64,
}

impl Pattern {
    fn of(f: &FanoMatrix) -> Result<Self> {
        const ALLOWED: [(usize, usize); 6] = [(0, 0), (3, 0), (0, 3), (1, 1), (2, 2), (3, 3)];
        for alpha in 0..4 {
            for beta in 0..4 {
                let value = f.get(alpha, beta);
                if !ALLOWED.contains(&(alpha, beta)) && value.abs() > STRUCTURE_TOL {
                    return Err(Error::UnsupportedStructure { alpha, beta, value });
                }
            }
        }
        Ok(Self {
            r30: f.get(3, 0),
            r03: f.get(0, 3),
            r11: f.get(1, 1),
            r22: f.get(2, 2),
            r33: f.get(3, 3),
        })
    }

    /// T₂ for a symmetric product with polarization `t`.
    fn total(&self, t: f64) -> f64 {
        let t2 = t * t;
        0.25 * (2.0 * (self.r03 * self.r03 - t2)
            + self.r11 * self.r11
            + self.r22 * self.r22
            + (self.r33 * self.r33 - t2 * t2))
    }

    fn branch_values(&self, t: f64, form: BranchForm) -> BranchValues {
        let t2 = t * t;
        match form {
            BranchForm::Minus => BranchValues {
                form,
                d2: 0.25 * (self.r11 * self.r11 + self.r22 * self.r22),
                c2: 0.25 * (2.0 * (self.r03 * self.r03 - t2) + (self.r33 * self.r33 - t2 * t2)),
                // π_χ⁻ coincides with π
                l2: 0.0,
            },
            BranchForm::Plus => BranchValues {
                form,
                d2: 0.25 * (self.r22 * self.r22 + self.r03 * self.r03 + self.r33 * self.r33),
                c2: 0.25 * self.r11 * self.r11,
                l2: 0.25 * (2.0 * t2 + t2 * t2 - self.r03 * self.r03),
            },
        }
    }

    fn classical_state(&self, form: BranchForm) -> FanoMatrix {
        match form {
            BranchForm::Minus => FanoMatrix::maximally_mixed()
                .with(3, 0, self.r30)
                .with(0, 3, self.r30)
                .with(3, 3, self.r33),
            BranchForm::Plus => FanoMatrix::maximally_mixed()
                .with(0, 3, self.r03)
                .with(1, 1, self.r11),
        }
    }

    fn classical_product(&self, t: f64, form: BranchForm) -> FanoMatrix {
        match form {
            BranchForm::Minus => product_state(t),
            BranchForm::Plus => FanoMatrix::maximally_mixed().with(0, 3, self.r03),
        }
    }
}

/// Symmetric product state with both local Bloch vectors (0, 0, t).
pub fn product_state(t: f64) -> FanoMatrix {
    FanoMatrix::maximally_mixed()
        .with(3, 0, t)
        .with(0, 3, t)
        .with(3, 3, t * t)
}

fn cube_root(x: f64) -> f64 {
    if x.abs() < CUBE_ROOT_FLOOR {
        0.0
    } else {
        x.cbrt()
    }
}

/// Eigenvalues of K = xxᵀ + RRᵀ, with x the first qubit's Bloch vector.
///
/// For this family K is diagonal: (r₁₁², r₂₂², r₃₀² + r₃₃²). Ties for the
/// largest eigenvalue resolve to λ₃.
pub fn k_spectrum(f: &FanoMatrix) -> Result<KSpectrum> {
    let p = Pattern::of(f)?;
    let lambda1 = p.r11 * p.r11;
    let lambda2 = p.r22 * p.r22;
    let lambda3 = p.r30 * p.r30 + p.r33 * p.r33;
    let lambda_max = if lambda3 >= lambda1 && lambda3 >= lambda2 {
        lambda3
    } else {
        lambda1.max(lambda2)
    };
    Ok(KSpectrum {
        lambda1,
        lambda2,
        lambda3,
        lambda_max,
    })
}

/// Closest product state of a pure-split state: a₃ = ∛r₃₀.
pub fn closest_product_pure(f: &FanoMatrix) -> Result<(ClosestStateParam, FanoMatrix)> {
    let p = Pattern::of(f)?;
    let a3 = cube_root(p.r30);
    Ok((
        ClosestStateParam {
            value: a3,
            delta: None,
        },
        product_state(a3),
    ))
}

fn pure_parts(split: PureSplit, s: OverlapParam) -> (Pattern, f64) {
    let f = pure_partition_fano(split, s);
    let p = Pattern::of(&f).expect("pure split has the symmetric pattern");
    (p, cube_root(p.r30))
}

pub fn total_pure(split: PureSplit, s: OverlapParam) -> f64 {
    let (p, a3) = pure_parts(split, s);
    p.total(a3)
}

/// D₂ = 2λ₊λ₋.
pub fn discord_pure(split: PureSplit, s: OverlapParam) -> f64 {
    let w = schmidt_coefficients(split, s);
    2.0 * w.lambda_plus * w.lambda_minus
}

/// χ = ¼[I + r₃₀(σ₃⊗I + I⊗σ₃) + r₃₃ σ₃⊗σ₃].
pub fn closest_classical_pure(split: PureSplit, s: OverlapParam) -> FanoMatrix {
    let (p, _) = pure_parts(split, s);
    p.classical_state(BranchForm::Minus)
}

pub fn classical_pure(split: PureSplit, s: OverlapParam) -> f64 {
    let (p, a3) = pure_parts(split, s);
    p.branch_values(a3, BranchForm::Minus).c2
}

/// The closest products of ρ and of χ coincide for the pure split.
pub fn l2_pure(split: PureSplit, s: OverlapParam) -> f64 {
    let (p, a3) = pure_parts(split, s);
    p.branch_values(a3, BranchForm::Minus).l2
}

/// Pure-split branch tag from the K ordering; a tie happens only at s = 0.
pub fn pure_branch(split: PureSplit, s: OverlapParam) -> Branch {
    let k = k_spectrum(&pure_partition_fano(split, s)).expect("pure split has the pattern");
    Branch::from_margin(k.lambda3 - k.lambda1)
}

fn cubic(c: f64, r30: f64, r33: f64) -> f64 {
    c * c * c + c * (1.0 - r33) - r30
}

fn bisect_cubic(r30: f64, r33: f64) -> f64 {
    let sign = r30.signum();
    let q = r30.abs();
    let (mut lo, mut hi) = (0.0_f64, q.cbrt().max(1.0));
    while cubic(hi, q, r33) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cubic(mid, q, r33) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    sign * 0.5 * (lo + hi)
}

/// Real root of c³ + c(1 − r₃₃) − r₃₀ = 0 by Cardano's formula.
///
/// With p = 1 − r₃₃ and Δ = r₃₀² + (4/27)p³ ≥ 0 the root is
/// ∛((√Δ + r₃₀)/2) − ∛((√Δ − r₃₀)/2). The second cube root equals p/(3A)
/// where A is the first, and is evaluated that way because √Δ − r₃₀ cancels
/// catastrophically when p is small.
pub fn cardano_c3(r30: f64, r33: f64) -> Result<ClosestStateParam> {
    let p = 1.0 - r33;
    let delta = r30 * r30 + 4.0 / 27.0 * p * p * p;
    if delta < DISCRIMINANT_FLOOR {
        return Err(Error::NegativeDiscriminant(delta));
    }
    let delta = delta.max(0.0);
    // the root is odd in r₃₀; work with |r₃₀| so that √Δ + |r₃₀| never cancels
    let q = r30.abs();
    let a = cube_root(0.5 * (delta.sqrt() + q));
    let mut root = if a == 0.0 { 0.0 } else { a - p / (3.0 * a) };
    root *= r30.signum();
    if r30 == 0.0 && p >= 0.0 {
        root = 0.0;
    }
    if cubic(root, r30, r33).abs() > CUBIC_RESIDUAL_TOL {
        root = bisect_cubic(r30, r33);
    }
    Ok(ClosestStateParam {
        value: root,
        delta: Some(delta),
    })
}

fn mixed_parts(pair: TracedPair, s: OverlapParam) -> (Pattern, ClosestStateParam) {
    let f = mixed_pair_fano(pair, s);
    let p = Pattern::of(&f).expect("traced pair has the symmetric pattern");
    let c3 = cardano_c3(p.r30, p.r33).expect("r33 <= 1 for the traced pair");
    (p, c3)
}

pub fn closest_product_mixed(pair: TracedPair, s: OverlapParam) -> (ClosestStateParam, FanoMatrix) {
    let (_, c3) = mixed_parts(pair, s);
    (c3, product_state(c3.value))
}

pub fn total_mixed(pair: TracedPair, s: OverlapParam) -> f64 {
    let (p, c3) = mixed_parts(pair, s);
    p.total(c3.value)
}

/// (s² + 1)(1 + s^{n−2}) − 2(1 − s²); positive when λ₁ < λ₃.
pub fn branch_margin(pair: TracedPair, s: OverlapParam) -> f64 {
    let s2 = s.pow(2);
    (s2 + 1.0) * (1.0 + s.pow(pair.n() - 2)) - 2.0 * (1.0 - s2)
}

pub fn branch_select(pair: TracedPair, s: OverlapParam) -> Branch {
    Branch::from_margin(branch_margin(pair, s))
}

/// Values of one branch form, whether or not that branch is selected.
pub fn mixed_branch_values(pair: TracedPair, s: OverlapParam, form: BranchForm) -> BranchValues {
    let (p, c3) = mixed_parts(pair, s);
    p.branch_values(c3.value, form)
}

pub fn discord_mixed(pair: TracedPair, s: OverlapParam) -> (f64, Branch) {
    let branch = branch_select(pair, s);
    (
        mixed_branch_values(pair, s, branch.canonical_form()).d2,
        branch,
    )
}

pub fn closest_classical_mixed(pair: TracedPair, s: OverlapParam) -> (FanoMatrix, Branch) {
    let branch = branch_select(pair, s);
    let (p, _) = mixed_parts(pair, s);
    (p.classical_state(branch.canonical_form()), branch)
}

/// χ of an explicitly chosen branch form.
pub fn classical_state_mixed(pair: TracedPair, s: OverlapParam, form: BranchForm) -> FanoMatrix {
    let (p, _) = mixed_parts(pair, s);
    p.classical_state(form)
}

/// Closest product to χ of the given form: π for the minus form, ¼[I + r₀₃ I⊗σ₃] for the plus form.
pub fn closest_classical_product_mixed(
    pair: TracedPair,
    s: OverlapParam,
    form: BranchForm,
) -> FanoMatrix {
    let (p, c3) = mixed_parts(pair, s);
    p.classical_product(c3.value, form)
}

pub fn classical_mixed(pair: TracedPair, s: OverlapParam) -> (f64, Branch) {
    let branch = branch_select(pair, s);
    (
        mixed_branch_values(pair, s, branch.canonical_form()).c2,
        branch,
    )
}

pub fn l2_mixed(pair: TracedPair, s: OverlapParam) -> (f64, Branch) {
    let branch = branch_select(pair, s);
    (
        mixed_branch_values(pair, s, branch.canonical_form()).l2,
        branch,
    )
}

/// ρ, π, χ and π_χ for the canonical branch of a partition.
pub fn closest_states(partition: PartitionSpec, s: OverlapParam) -> ClosestStates {
    match partition {
        PartitionSpec::PureSplit { n, k } => {
            let split = PureSplit::new(n, k).expect("validated partition");
            let rho = pure_partition_fano(split, s);
            let (_, product) = closest_product_pure(&rho).expect("pure split has the pattern");
            ClosestStates {
                rho,
                product,
                classical: closest_classical_pure(split, s),
                classical_product: product,
            }
        }
        PartitionSpec::TracedPair { n } => {
            let pair = TracedPair::new(n).expect("validated partition");
            let form = branch_select(pair, s).canonical_form();
            let (p, c3) = mixed_parts(pair, s);
            ClosestStates {
                rho: mixed_pair_fano(pair, s),
                product: product_state(c3.value),
                classical: p.classical_state(form),
                classical_product: p.classical_product(c3.value, form),
            }
        }
    }
}

/// All four measures, the branch and the additivity residual for one state.
pub fn report(partition: PartitionSpec, s: OverlapParam) -> CorrelationReport {
    let (t2, d2, c2, l2, branch, closest_param, tie_alternate) = match partition {
        PartitionSpec::PureSplit { n, k } => {
            let split = PureSplit::new(n, k).expect("validated partition");
            let (p, a3) = pure_parts(split, s);
            let branch = pure_branch(split, s);
            let minus = p.branch_values(a3, BranchForm::Minus);
            let alternate = (branch == Branch::Tie).then(|| p.branch_values(a3, BranchForm::Plus));
            (
                p.total(a3),
                discord_pure(split, s),
                minus.c2,
                minus.l2,
                branch,
                ClosestStateParam {
                    value: a3,
                    delta: None,
                },
                alternate,
            )
        }
        PartitionSpec::TracedPair { n } => {
            let pair = TracedPair::new(n).expect("validated partition");
            let (p, c3) = mixed_parts(pair, s);
            let branch = branch_select(pair, s);
            let values = p.branch_values(c3.value, branch.canonical_form());
            let alternate =
                (branch == Branch::Tie).then(|| p.branch_values(c3.value, BranchForm::Plus));
            (
                p.total(c3.value),
                values.d2,
                values.c2,
                values.l2,
                branch,
                c3,
                alternate,
            )
        }
    };
    CorrelationReport {
        partition,
        s,
        t2,
        d2,
        c2,
        l2,
        branch,
        closest_param,
        residual: t2 - d2 - c2 + l2,
        tie_alternate,
    }
}

/// The four measures recomputed as purity gaps of the closest states.
pub fn purity_gaps(states: &ClosestStates) -> [f64; 4] {
    let (pr, pp, pc, pcp) = (
        purity(&states.rho),
        purity(&states.product),
        purity(&states.classical),
        purity(&states.classical_product),
    );
    [pr - pp, pr - pc, pc - pcp, pp - pcp]
}
