//! Reduced states rebuilt from the full 2ⁿ-amplitude state vector.
//!
//! These do not use any of the coefficient formulas: the n-qubit vector is
//! assembled from tensor powers of the single-qubit states, normalized
//! numerically, and then either partially traced or projected onto the
//! logical-qubit bases of the k | n−k cut.

use nalgebra::{DMatrix, Matrix4};

use crate::fano_bloch::{DensityMatrix4, C64};

/// √ω|0⟩ ± √(1−ω)|1⟩ for s = 2ω − 1.
fn coherent(s: f64, sign: f64) -> [f64; 2] {
    let omega = 0.5 * (1.0 + s);
    [omega.sqrt(), sign * (1.0 - omega).max(0.0).sqrt()]
}

fn tensor_power(single: [f64; 2], count: u32) -> Vec<f64> {
    let mut v = vec![1.0];
    for _ in 0..count {
        v = v
            .iter()
            .flat_map(|&a| [a * single[0], a * single[1]])
            .collect();
    }
    v
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// The n-qubit superposition |ω,+⟩^{⊗n} + |ω,−⟩^{⊗n}, normalized.
pub fn n_qubit_state(n: u32, s: f64) -> Vec<f64> {
    let plus = tensor_power(coherent(s, 1.0), n);
    let minus = tensor_power(coherent(s, -1.0), n);
    normalized(plus.iter().zip(&minus).map(|(a, b)| a + b).collect())
}

/// Partial trace of the n-qubit state onto qubits 1 and 2.
pub fn reduced_pair_numeric(n: u32, s: f64) -> DensityMatrix4 {
    let psi = n_qubit_state(n, s);
    let rest = 1usize << (n - 2);
    // row index = first two qubits, column index = the traced ones
    let m = DMatrix::from_row_slice(4, rest, &psi);
    let rho = &m * m.transpose();
    DensityMatrix4::from_matrix(Matrix4::from_fn(|i, j| C64::new(rho[(i, j)], 0.0)))
}

/// Logical basis {(|+⟩ + |−⟩)/‖·‖, (|+⟩ − |−⟩)/‖·‖} of a block of `count` qubits.
/// The second vector vanishes at s = 1 and is returned as `None`.
fn logical_basis(s: f64, count: u32) -> [Option<Vec<f64>>; 2] {
    let plus = tensor_power(coherent(s, 1.0), count);
    let minus = tensor_power(coherent(s, -1.0), count);
    let make = |sign: f64| {
        let v: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| a + sign * b).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm > 1e-12).then(|| v.into_iter().map(|x| x / norm).collect())
    };
    [make(1.0), make(-1.0)]
}

/// The k | n−k state written on two logical qubits, as a 4×4 density matrix.
pub fn pure_partition_numeric(n: u32, k: u32, s: f64) -> DensityMatrix4 {
    let psi = n_qubit_state(n, s);
    let cols = 1usize << (n - k);
    let m = DMatrix::from_row_slice(1usize << k, cols, &psi);
    let left = logical_basis(s, k);
    let right = logical_basis(s, n - k);
    let mut amp = [0.0; 4];
    for (a, l) in left.iter().enumerate() {
        for (b, r) in right.iter().enumerate() {
            if let (Some(l), Some(r)) = (l, r) {
                let mut acc = 0.0;
                for (i, li) in l.iter().enumerate() {
                    for (j, rj) in r.iter().enumerate() {
                        acc += li * m[(i, j)] * rj;
                    }
                }
                amp[2 * a + b] = acc;
            }
        }
    }
    DensityMatrix4::from_matrix(Matrix4::from_fn(|i, j| C64::new(amp[i] * amp[j], 0.0)))
}
