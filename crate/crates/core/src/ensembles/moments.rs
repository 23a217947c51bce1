//! Exact t-copy moments as weighted sums of subsystem permutation operators.

use num_complex::Complex64;

use super::GhseParams;
use crate::error::{out_of_range, Result};
use crate::qcore::{check_qubits, trace_distance, ComplexMatrix, DensityMatrix};

pub const MAX_COPIES: usize = 6;

/// All permutations of `0..t` in lexicographic order.
pub fn permutations(t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..t).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(i) = (1..t).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..t).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

pub fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
        }
    }
    cycles
}

/// Image of a basis index under the block permutation: block `k` of the
/// input lands in block `perm[k]` of the output.
fn permute_index(x: usize, perm: &[usize], n: usize) -> usize {
    let t = perm.len();
    let mask = (1usize << n) - 1;
    let mut y = 0;
    for (k, &dest) in perm.iter().enumerate() {
        let block = (x >> ((t - 1 - k) * n)) & mask;
        y |= block << ((t - 1 - dest) * n);
    }
    y
}

/// 0/1 matrix permuting `perm.len()` blocks of `n` qubits.
pub fn permutation_operator(perm: &[usize], n: usize) -> Result<ComplexMatrix> {
    check_qubits(perm.len() * n)?;
    let dim = 1usize << (perm.len() * n);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        out[(permute_index(x, perm, n), x)] = Complex64::new(1.0, 0.0);
    }
    Ok(out)
}

fn check_copies(n: usize, t: usize) -> Result<()> {
    if t == 0 || t > MAX_COPIES {
        return Err(out_of_range("copies", format!("t = {t} not in 1..={MAX_COPIES}")));
    }
    check_qubits(t * n)
}

/// E[ρ^{⊗t}] over GHSE(n, m):
/// Σ_π d_B^{cycles(π)} π̂ / ∏_{j<t} (d_A d_B + j).
pub fn ghse_moment_exact(params: GhseParams, t: usize) -> Result<DensityMatrix> {
    let (n, m) = (params.n(), params.m());
    check_copies(n, t)?;
    let ln2 = std::f64::consts::LN_2;
    let big_d = 2f64.powi((n + m) as i32);
    let log_norm: f64 = (0..t).map(|j| (big_d + j as f64).ln()).sum();
    let dim = 1usize << (t * n);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for perm in permutations(t) {
        let w = ((cycle_count(&perm) * m) as f64 * ln2 - log_norm).exp();
        for x in 0..dim {
            out[(permute_index(x, &perm, n), x)].re += w;
        }
    }
    DensityMatrix::new(out)
}

/// E[|ψ⟩⟨ψ|^{⊗t}] over Haar states: the normalized symmetric projector
/// binom(d+t−1, t)^{-1} · (1/t!) Σ_π π̂.
pub fn haar_moment_exact(n: usize, t: usize) -> Result<DensityMatrix> {
    check_copies(n, t)?;
    let d = 2f64.powi(n as i32);
    // binom(d+t-1, t) · t! = d (d+1) … (d+t-1)
    let rising: f64 = (0..t).map(|j| d + j as f64).product();
    let dim = 1usize << (t * n);
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for perm in permutations(t) {
        sum = &sum + &permutation_operator(&perm, n)?;
    }
    DensityMatrix::new(sum.scale_real(1.0 / rising))
}

/// Trace distance between the exact GHSE t-copy moment and (I/2^n)^{⊗t}.
pub fn td_ghse_to_mixed(params: GhseParams, t: usize) -> Result<f64> {
    let moment = ghse_moment_exact(params, t)?;
    let mixed = DensityMatrix::maximally_mixed(t * params.n())?;
    trace_distance(&moment, &mixed)
}

/// Leading-order expansion t(t−1)/(2 d_B)·(1 + 1/(2 d_A)) plus an explicit
/// remainder 2 t⁴ / d_B².
pub fn moment_td_envelope(n: usize, m: usize, t: usize) -> f64 {
    let t = t as f64;
    let d_b = 2f64.powi(m as i32);
    let d_a = 2f64.powi(n as i32);
    t * (t - 1.0) / (2.0 * d_b) * (1.0 + 1.0 / (2.0 * d_a)) + 2.0 * t.powi(4) / (d_b * d_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_haar_state, RngSeed};
    use crate::qcore::tensor;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        let cycles: Vec<usize> = permutations(3).iter().map(|p| cycle_count(p)).collect();
        // identity has 3 cycles, three transpositions 2, two 3-cycles 1
        assert_eq!(cycles.iter().filter(|&&c| c == 3).count(), 1);
        assert_eq!(cycles.iter().filter(|&&c| c == 2).count(), 3);
        assert_eq!(cycles.iter().filter(|&&c| c == 1).count(), 2);
    }

    #[test]
    fn swap_operator_on_two_qubits() {
        let swap = permutation_operator(&[1, 0], 1).unwrap();
        // |01⟩ ↔ |10⟩
        assert_eq!(swap[(2, 1)].re, 1.0);
        assert_eq!(swap[(1, 2)].re, 1.0);
        assert_eq!(swap[(0, 0)].re, 1.0);
        assert_eq!(swap[(3, 3)].re, 1.0);
        assert_eq!(swap[(1, 1)].re, 0.0);
    }

    #[test]
    fn first_moment_is_maximally_mixed() {
        for (n, m) in [(1, 0), (2, 3), (3, 1)] {
            let mom = ghse_moment_exact(GhseParams::new(n, m).unwrap(), 1).unwrap();
            let mixed = DensityMatrix::maximally_mixed(n).unwrap();
            assert!(mom.matrix().approx_eq(mixed.matrix(), 1e-14));
            assert!(td_ghse_to_mixed(GhseParams::new(n, m).unwrap(), 1).unwrap() < 1e-14);
        }
    }

    #[test]
    fn second_moment_single_qubit() {
        // (I + SWAP)/6
        let expected = (&ComplexMatrix::identity(4) + &permutation_operator(&[1, 0], 1).unwrap()).scale_real(1.0 / 6.0);
        let ghse = ghse_moment_exact(GhseParams::new(1, 0).unwrap(), 2).unwrap();
        let haar = haar_moment_exact(1, 2).unwrap();
        assert!(ghse.matrix().approx_eq(&expected, 1e-15));
        assert!(haar.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn second_moment_matches_monte_carlo() {
        let exact = haar_moment_exact(1, 2).unwrap();
        let mut acc = ComplexMatrix::zeros(4, 4);
        let trials = 20_000;
        for s in 0..trials {
            let rho = sample_haar_state(1, RngSeed::new(8, s)).unwrap().projector();
            acc = &acc + tensor(&rho, &rho).unwrap().matrix();
        }
        let mc = acc.scale_real(1.0 / trials as f64);
        assert!(mc.max_abs_diff(exact.matrix()) < 0.01);
    }

    #[test]
    fn haar_formula_agrees_with_ghse_at_m0() {
        for (n, t) in [(1, 3), (2, 2), (2, 3), (1, 5)] {
            let a = haar_moment_exact(n, t).unwrap();
            let b = ghse_moment_exact(GhseParams::new(n, 0).unwrap(), t).unwrap();
            assert!(a.matrix().approx_eq(b.matrix(), 1e-12));
            assert!((a.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_approaches_mixed_for_large_m() {
        let mom = ghse_moment_exact(GhseParams::new(1, 12).unwrap(), 2).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(mom.matrix().max_abs_diff(mixed.matrix()) < 1e-3);
    }

    #[test]
    fn td_is_monotone_in_m() {
        let a = td_ghse_to_mixed(GhseParams::new(2, 3).unwrap(), 2).unwrap();
        let b = td_ghse_to_mixed(GhseParams::new(2, 1).unwrap(), 2).unwrap();
        assert!(a <= b);
    }

    #[test]
    fn td_is_within_envelope() {
        let td = td_ghse_to_mixed(GhseParams::new(3, 2).unwrap(), 2).unwrap();
        assert!(td <= moment_td_envelope(3, 2, 2));
    }

    #[test]
    fn copy_limits() {
        assert!(ghse_moment_exact(GhseParams::new(1, 0).unwrap(), 0).is_err());
        assert!(ghse_moment_exact(GhseParams::new(1, 0).unwrap(), 7).is_err());
        assert!(ghse_moment_exact(GhseParams::new(5, 0).unwrap(), 3).is_err());
    }
}
