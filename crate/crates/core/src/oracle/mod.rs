//! Numerical verification of the closed forms.
//!
//! Nothing here reads the closed-form answers. The closest product and
//! closest classical states are found by multi-start simplex descent on the
//! squared Hilbert-Schmidt distance over explicitly parameterized state
//! families; K is diagonalized by Jacobi rotations; reduced states are
//! rebuilt from the full n-qubit vector.
//!
//! Each start draws its initial point from its own ChaCha stream derived from
//! the caller's seed, so results do not depend on how starts are scheduled.

pub mod brute;
pub mod eigen;
pub mod simplex;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::product_state;
use crate::error::{Error, Result};
use crate::fano_bloch::{hs_distance_sq, FanoMatrix};

pub use brute::{n_qubit_state, pure_partition_numeric, reduced_pair_numeric};
pub use eigen::{geometric_discord_numeric, k_matrix, sym3_eigenvalues, Mat3};

pub const DEFAULT_STARTS: usize = 32;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;

const MIN_PRODUCT_STARTS: usize = 8;
const MIN_CLASSICAL_STARTS: usize = 16;
const SIMPLEX_STEP: f64 = 0.2;
const FD_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub starts: usize,
    /// Convergence threshold on the spread of objective values.
    pub tol: f64,
    /// Iteration cap per start.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            starts: DEFAULT_STARTS,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            seed: DEFAULT_SEED,
        }
    }
}

/// Local Bloch vectors of a product state a ⊗ b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductParam {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

/// Σ p_ij Π_i ⊗ Π'_j with projectors (I ± u·σ)/2 and (I ± v·σ)/2.
///
/// `p` is ordered (++, +−, −+, −−).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalParam {
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub p: [f64; 4],
}

/// Σ_i p_i Π_i ⊗ τ_i: a projective basis (I ± u·σ)/2 on the first qubit and
/// arbitrary conditional states τ_± = (I + b_±·σ)/2 on the second.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalQuantumParam {
    pub u: [f64; 3],
    pub p: [f64; 2],
    pub conditional: [[f64; 3]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Argmin {
    Product(ProductParam),
    Classical(ClassicalParam),
    ClassicalQuantum(ClassicalQuantumParam),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub min_distance_sq: f64,
    pub argmin: Argmin,
    pub starts: usize,
    pub converged_fraction: f64,
}

/// Which family of classically correlated states to search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalFamily {
    /// Measured on the first qubit only (classical-quantum states). This is
    /// the family whose minimum is the geometric discord.
    MeasuredFirst,
    /// Diagonal in a product basis on both sides.
    BothSides,
}

/// Squared norm excess beyond the unit ball; zero inside it.
fn ball_excess(v: &[f64]) -> f64 {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (norm - 1.0).max(0.0).powi(2)
}

fn project_to_ball(v: &[f64]) -> [f64; 3] {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    [v[0] * scale, v[1] * scale, v[2] * scale]
}

fn unit_from_angles(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

fn product_coefficients(a: &[f64; 3], b: &[f64; 3]) -> FanoMatrix {
    let mut r = [[0.0; 4]; 4];
    r[0][0] = 1.0;
    for i in 0..3 {
        r[i + 1][0] = a[i];
        r[0][i + 1] = b[i];
        for j in 0..3 {
            r[i + 1][j + 1] = a[i] * b[j];
        }
    }
    FanoMatrix::from_raw(r)
}

impl ProductParam {
    fn decode(x: &[f64]) -> Self {
        Self {
            a: project_to_ball(&x[0..3]),
            b: project_to_ball(&x[3..6]),
        }
    }

    pub fn state(&self) -> FanoMatrix {
        product_coefficients(&self.a, &self.b)
    }
}

impl ClassicalParam {
    fn decode(x: &[f64]) -> Self {
        let raw = [x[4] * x[4], x[5] * x[5], x[6] * x[6], x[7] * x[7]];
        let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        Self {
            u: unit_from_angles(x[0], x[1]),
            v: unit_from_angles(x[2], x[3]),
            p: raw.map(|w| w / total),
        }
    }

    pub fn state(&self) -> FanoMatrix {
        let [pp, pm, mp, mm] = self.p;
        let first = pp + pm - mp - mm;
        let second = pp - pm + mp - mm;
        let joint = pp - pm - mp + mm;
        let mut r = [[0.0; 4]; 4];
        r[0][0] = 1.0;
        for i in 0..3 {
            r[i + 1][0] = first * self.u[i];
            r[0][i + 1] = second * self.v[i];
            for j in 0..3 {
                r[i + 1][j + 1] = joint * self.u[i] * self.v[j];
            }
        }
        FanoMatrix::from_raw(r)
    }
}

impl ClassicalQuantumParam {
    fn decode(x: &[f64]) -> Self {
        let c = x[2].cos();
        Self {
            u: unit_from_angles(x[0], x[1]),
            p: [c * c, 1.0 - c * c],
            conditional: [project_to_ball(&x[3..6]), project_to_ball(&x[6..9])],
        }
    }

    pub fn state(&self) -> FanoMatrix {
        let [p_plus, p_minus] = self.p;
        let [b_plus, b_minus] = self.conditional;
        let mut r = [[0.0; 4]; 4];
        r[0][0] = 1.0;
        for i in 0..3 {
            r[i + 1][0] = (p_plus - p_minus) * self.u[i];
            r[0][i + 1] = p_plus * b_plus[i] + p_minus * b_minus[i];
            for j in 0..3 {
                r[i + 1][j + 1] = self.u[i] * (p_plus * b_plus[j] - p_minus * b_minus[j]);
            }
        }
        FanoMatrix::from_raw(r)
    }
}

impl Argmin {
    pub fn state(&self) -> FanoMatrix {
        match self {
            Argmin::Product(p) => p.state(),
            Argmin::Classical(p) => p.state(),
            Argmin::ClassicalQuantum(p) => p.state(),
        }
    }
}

/// Search box of one coordinate, used to draw starting points.
type Bounds = (f64, f64);

/// Multi-start descent. `penalty` must vanish on canonical parameters; it only
/// removes the flat directions that decoding introduces outside them.
fn multistart<D, P>(
    target: &FanoMatrix,
    bounds: &[Bounds],
    decode: D,
    penalty: P,
    config: &OracleConfig,
) -> OracleResult
where
    D: Fn(&[f64]) -> Argmin + Sync,
    P: Fn(&[f64]) -> f64 + Sync,
{
    let distance = |x: &[f64]| hs_distance_sq(target, &decode(x).state());
    let objective = |x: &[f64]| distance(x) + penalty(x);
    let runs: Vec<simplex::Minimum> = (0..config.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(start as u64);
            let x0: Vec<f64> = bounds
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..hi))
                .collect();
            simplex::minimize(objective, &x0, SIMPLEX_STEP, config.tol, config.max_iter)
        })
        .collect();
    let converged = runs.iter().filter(|m| m.converged).count();
    // first index wins ties, so the result is independent of scheduling
    let best = runs
        .iter()
        .reduce(|best, m| if m.value < best.value { m } else { best })
        .expect("at least one start");
    OracleResult {
        min_distance_sq: distance(&best.x),
        argmin: decode(&best.x),
        starts: config.starts,
        converged_fraction: converged as f64 / config.starts as f64,
    }
}

/// Minimizes the squared HS distance from `f` over all product states.
pub fn nearest_product_numeric(f: &FanoMatrix, config: &OracleConfig) -> Result<OracleResult> {
    if config.starts < MIN_PRODUCT_STARTS {
        return Err(Error::TooFewStarts {
            what: "nearest_product_numeric",
            min: MIN_PRODUCT_STARTS,
            got: config.starts,
        });
    }
    let bounds = [(-1.0, 1.0); 6];
    Ok(multistart(
        f,
        &bounds,
        |x| Argmin::Product(ProductParam::decode(x)),
        |x| ball_excess(&x[0..3]) + ball_excess(&x[3..6]),
        config,
    ))
}

/// Minimizes over classical-quantum states (measurement on the first qubit).
pub fn nearest_classical_numeric(f: &FanoMatrix, config: &OracleConfig) -> Result<OracleResult> {
    nearest_classical_numeric_in(f, ClassicalFamily::MeasuredFirst, config)
}

pub fn nearest_classical_numeric_in(
    f: &FanoMatrix,
    family: ClassicalFamily,
    config: &OracleConfig,
) -> Result<OracleResult> {
    if config.starts < MIN_CLASSICAL_STARTS {
        return Err(Error::TooFewStarts {
            what: "nearest_classical_numeric",
            min: MIN_CLASSICAL_STARTS,
            got: config.starts,
        });
    }
    let result = match family {
        ClassicalFamily::MeasuredFirst => {
            let bounds = [
                (0.0, PI),
                (0.0, 2.0 * PI),
                (0.0, 0.5 * PI),
                (-1.0, 1.0),
                (-1.0, 1.0),
                (-1.0, 1.0),
                (-1.0, 1.0),
                (-1.0, 1.0),
                (-1.0, 1.0),
            ];
            multistart(
                f,
                &bounds,
                |x| Argmin::ClassicalQuantum(ClassicalQuantumParam::decode(x)),
                |x| ball_excess(&x[3..6]) + ball_excess(&x[6..9]),
                config,
            )
        }
        ClassicalFamily::BothSides => {
            let bounds = [
                (0.0, PI),
                (0.0, 2.0 * PI),
                (0.0, PI),
                (0.0, 2.0 * PI),
                (0.0, 1.0),
                (0.0, 1.0),
                (0.0, 1.0),
                (0.0, 1.0),
            ];
            multistart(
                f,
                &bounds,
                |x| Argmin::Classical(ClassicalParam::decode(x)),
                // fixes the scale of the unnormalized weights
                |x| (x[4..8].iter().map(|w| w * w).sum::<f64>() - 1.0).powi(2),
                config,
            )
        }
    };
    Ok(result)
}

/// |d/dt ‖ρ − π(t)‖²| at `t0` by central differences, π(t) the symmetric
/// product with local Bloch vectors (0, 0, t).
pub fn stationarity_check(f: &FanoMatrix, t0: f64) -> f64 {
    let dist = |t: f64| hs_distance_sq(f, &product_state(t));
    ((dist(t0 + FD_STEP) - dist(t0 - FD_STEP)) / (2.0 * FD_STEP)).abs()
}
