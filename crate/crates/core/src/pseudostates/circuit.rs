//! Keyed brickwork circuits and the verifiable PRDM built on them.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::Key;
use crate::ensembles::haar_unitary_from_rng;
use crate::error::{out_of_range, Error, Result};
use crate::qcore::{check_qubits, ComplexMatrix, DensityMatrix};

fn apply_single(u: &mut ComplexMatrix, gate: &ComplexMatrix, qubit: usize, n: usize) {
    let bit = 1usize << (n - 1 - qubit);
    let (g00, g01, g10, g11) = (gate[(0, 0)], gate[(0, 1)], gate[(1, 0)], gate[(1, 1)]);
    let cols = u.cols();
    for r0 in (0..u.rows()).filter(|r| r & bit == 0) {
        let r1 = r0 | bit;
        for c in 0..cols {
            let a = u[(r0, c)];
            let b = u[(r1, c)];
            u[(r0, c)] = g00 * a + g01 * b;
            u[(r1, c)] = g10 * a + g11 * b;
        }
    }
}

fn apply_cz(u: &mut ComplexMatrix, q: usize, n: usize) {
    let mask = (1usize << (n - 1 - q)) | (1usize << (n - 2 - q));
    for r in (0..u.rows()).filter(|r| r & mask == mask) {
        for c in 0..u.cols() {
            u[(r, c)] = -u[(r, c)];
        }
    }
}

/// Unitary of `depth` layers, each a key-derived Haar single-qubit gate on
/// every qubit followed by CZ on alternating nearest-neighbour pairs.
pub fn keyed_random_circuit(key: &Key, n: usize, depth: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(out_of_range("circuit qubits", "n must be at least 1"));
    }
    check_qubits(n)?;
    let mut h = Sha256::new();
    h.update(b"prdm/circuit");
    h.update((key.kappa() as u32).to_be_bytes());
    h.update((n as u32).to_be_bytes());
    h.update(key.bytes());
    let mut rng = ChaCha8Rng::from_seed(h.finalize().into());

    let mut u = ComplexMatrix::identity(1 << n);
    for layer in 0..depth {
        for q in 0..n {
            let gate = haar_unitary_from_rng(2, &mut rng);
            apply_single(&mut u, &gate, q, n);
        }
        for q in (layer % 2..n.saturating_sub(1)).step_by(2) {
            apply_cz(&mut u, q, n);
        }
    }
    Ok(u)
}

/// U (|0⟩⟨0|^{⊗(n−m)} ⊗ I/2^m) U† with U the keyed circuit.
pub fn vprdm_make(key: &Key, n: usize, m: usize, depth: usize) -> Result<DensityMatrix> {
    if m >= n {
        return Err(out_of_range("mixed qubits", format!("m = {m} must be below n = {n}")));
    }
    let u = keyed_random_circuit(key, n, depth)?;
    let dim = 1usize << n;
    let rank = 1usize << m;
    let w = 1.0 / rank as f64;
    let out = ComplexMatrix::from_fn(dim, dim, |i, j| {
        (0..rank).map(|k| u[(i, k)] * u[(j, k)].conj()).sum::<Complex64>() * w
    });
    DensityMatrix::new(out)
}

/// Probability that undoing the keyed circuit leaves the leading n−m qubits
/// in |0…0⟩.
pub fn vprdm_verify(rho: &DensityMatrix, key: &Key, m: usize, depth: usize) -> Result<f64> {
    let n = rho.num_qubits();
    if m >= n {
        return Err(out_of_range("mixed qubits", format!("m = {m} must be below n = {n}")));
    }
    let u = keyed_random_circuit(key, n, depth)?;
    if u.rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: rho.dim(),
        });
    }
    let dim = rho.dim();
    let r = rho.matrix();
    let mut total = 0.0;
    for k in 0..(1usize << m) {
        let col: Vec<Complex64> = (0..dim).map(|i| u[(i, k)]).collect();
        let rc = r.mul_vec(&col)?;
        total += col.iter().zip(&rc).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
    }
    Ok(total.clamp(0.0, 1.0))
}
