//! Real symmetric 3×3 eigenvalues by cyclic Jacobi rotations, and the K matrix.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::fano_bloch::FanoMatrix;

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

pub type Mat3 = [[f64; 3]; 3];

/// Eigenvalues of a symmetric 3×3 matrix, sorted descending.
pub fn sym3_eigenvalues(k: &Mat3) -> Result<[f64; 3]> {
    let mut asym: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            asym = asym.max((k[i][j] - k[j][i]).abs());
        }
    }
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let mut a = *k;
    let scale: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // A ← Jᵀ A J with J the (p, q) rotation
            for r in 0..3 {
                let arp = a[r][p];
                let arq = a[r][q];
                a[r][p] = c * arp - s * arq;
                a[r][q] = s * arp + c * arq;
            }
            for r in 0..3 {
                let apr = a[p][r];
                let aqr = a[q][r];
                a[p][r] = c * apr - s * aqr;
                a[q][r] = s * apr + c * aqr;
            }
        }
    }
    let mut vals = [a[0][0], a[1][1], a[2][2]];
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok(vals)
}

/// K = xxᵀ + RRᵀ with x the first qubit's Bloch vector and R the correlation block.
pub fn k_matrix(f: &FanoMatrix) -> Mat3 {
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut v = f.get(i + 1, 0) * f.get(j + 1, 0);
            for m in 0..3 {
                v += f.get(i + 1, m + 1) * f.get(j + 1, m + 1);
            }
            k[i][j] = v;
        }
    }
    k
}

/// ¼(‖x‖² + ‖R‖² − λ_max(K)): the geometric discord with measurement on the first qubit.
pub fn geometric_discord_numeric(f: &FanoMatrix) -> f64 {
    let k = k_matrix(f);
    let vals = sym3_eigenvalues(&k).expect("K is symmetric by construction");
    0.25 * (k[0][0] + k[1][1] + k[2][2] - vals[0])
}
