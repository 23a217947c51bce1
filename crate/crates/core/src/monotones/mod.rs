//! Resource monotones: coherence, an entanglement lower bound, and magic
//! (stabilizer fidelity, stabilizer 2-Rényi entropy, robustness).

mod lp;
mod stabilizer;

use crate::error::{out_of_range, Error, Result};
use crate::qcore::{
    diagonal_probabilities, partial_trace, shannon_entropy, von_neumann_entropy, Bipartition, ComplexMatrix,
    DensityMatrix, PauliString, PureState,
};

pub use lp::{solve_standard_form, LpStatus, SimplexSolution};
pub use stabilizer::{
    enumerate_stabilizer_states, stabilizer_count, stabilizer_group_size, StabilizerStateSet, MAX_STABILIZER_QUBITS,
};

pub const DEFAULT_MAX_PIVOTS: usize = 200_000;
const MAX_RENYI_QUBITS: usize = 8;

/// max_φ |⟨ψ|φ⟩|² over the stabilizer set.
pub fn stabilizer_fidelity(psi: &PureState, stab: &StabilizerStateSet) -> Result<f64> {
    if psi.num_qubits() != stab.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << stab.num_qubits(),
            got: psi.dim(),
        });
    }
    let mut best: f64 = 0.0;
    for phi in stab.states() {
        best = best.max(psi.inner(phi)?.norm_sqr());
    }
    Ok(best.min(1.0))
}

fn walsh_hadamard(v: &mut [num_complex::Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Σ_P ⟨ψ|P|ψ⟩⁴ over all 4^n unsigned Pauli strings.
pub fn pauli_fourth_moment(psi: &PureState) -> Result<f64> {
    let n = psi.num_qubits();
    if n > MAX_RENYI_QUBITS {
        return Err(out_of_range("Pauli sweep qubits", format!("{n} > {MAX_RENYI_QUBITS}")));
    }
    let a = psi.amplitudes();
    let d = a.len();
    let mut total = 0.0;
    let mut v = vec![num_complex::Complex64::new(0.0, 0.0); d];
    for x in 0..d {
        for j in 0..d {
            v[j] = a[j ^ x].conj() * a[j];
        }
        // entry z is Σ_j v_j (−1)^{z·j}; the i^{|x∧z|} phase does not change the modulus
        walsh_hadamard(&mut v);
        total += v.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>();
    }
    Ok(total)
}

/// M₂(ψ) = −log₂(d⁻¹ Σ_P ⟨ψ|P|ψ⟩⁴), zero exactly on stabilizer states.
pub fn stabilizer_renyi_2(psi: &PureState) -> Result<f64> {
    let s = pauli_fourth_moment(psi)?;
    Ok((-(s / psi.dim() as f64).log2()).max(0.0))
}

/// Result of the L1-minimal stabilizer decomposition ρ = Σ_φ c_φ φ.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub coefficients: Vec<f64>,
    /// R(ρ) = Σ|c_φ|.
    pub objective: f64,
    pub status: LpStatus,
    /// Coefficients y_P of the dual witness A = Σ_P y_P P, indexed like
    /// [`PauliString::all`].
    pub witness: Option<Vec<f64>>,
    pub pivots: usize,
}

impl LpSolution {
    /// log₂ R(ρ).
    pub fn log_robustness(&self) -> f64 {
        self.objective.max(1.0).log2()
    }
}

/// Outcome of checking a dual witness A: max_φ |tr(Aφ)| and tr(Aρ).
#[derive(Clone, Copy, Debug)]
pub struct WitnessCheck {
    pub max_stabilizer_value: f64,
    pub value: f64,
}

fn expectation_table(stab: &StabilizerStateSet, paulis: &[PauliString]) -> Result<Vec<Vec<f64>>> {
    paulis
        .iter()
        .map(|p| {
            stab.states()
                .iter()
                .map(|phi| p.expectation(phi).map(|e| e.round()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

/// Robustness of magic with the default pivot budget.
pub fn robustness_of_magic(rho: &DensityMatrix, stab: &StabilizerStateSet) -> Result<LpSolution> {
    robustness_of_magic_with_limit(rho, stab, DEFAULT_MAX_PIVOTS)
}

/// min Σ|c_φ| subject to Σ c_φ tr(Pφ) = tr(Pρ) for every Pauli P. The
/// Pauli expansion gives d² real equations for complex Hermitian ρ; the
/// coefficients are split as c = c⁺ − c⁻.
pub fn robustness_of_magic_with_limit(
    rho: &DensityMatrix,
    stab: &StabilizerStateSet,
    max_pivots: usize,
) -> Result<LpSolution> {
    let n = rho.num_qubits();
    if n != stab.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << stab.num_qubits(),
            got: rho.dim(),
        });
    }
    let paulis: Vec<PauliString> = PauliString::all(n).collect();
    let table = expectation_table(stab, &paulis)?;
    let k = stab.len();
    let a: Vec<Vec<f64>> = table
        .iter()
        .map(|row| row.iter().copied().chain(row.iter().map(|v| -v)).collect())
        .collect();
    let b: Vec<f64> = paulis.iter().map(|p| p.expectation_mixed(rho)).collect::<Result<_>>()?;
    let cost = vec![1.0; 2 * k];
    let sol = solve_standard_form(&cost, &a, &b, max_pivots)?;
    if sol.status == LpStatus::Infeasible {
        return Err(Error::Lp("stabilizer states failed to span the input".into()));
    }
    let coefficients: Vec<f64> = (0..k).map(|i| sol.x[i] - sol.x[k + i]).collect();
    Ok(LpSolution {
        objective: coefficients.iter().map(|c| c.abs()).sum(),
        coefficients,
        status: sol.status,
        witness: sol.dual,
        pivots: sol.pivots,
    })
}

/// Evaluates A = Σ_P y_P P on every stabilizer state and on ρ.
pub fn check_witness(witness: &[f64], rho: &DensityMatrix, stab: &StabilizerStateSet) -> Result<WitnessCheck> {
    let n = rho.num_qubits();
    let paulis: Vec<PauliString> = PauliString::all(n).collect();
    if witness.len() != paulis.len() {
        return Err(Error::DimensionMismatch {
            expected: paulis.len(),
            got: witness.len(),
        });
    }
    let mut max_stab: f64 = 0.0;
    for phi in stab.states() {
        let mut v = 0.0;
        for (y, p) in witness.iter().zip(&paulis) {
            v += y * p.expectation(phi)?;
        }
        max_stab = max_stab.max(v.abs());
    }
    let mut value = 0.0;
    for (y, p) in witness.iter().zip(&paulis) {
        value += y * p.expectation_mixed(rho)?;
    }
    Ok(WitnessCheck {
        max_stabilizer_value: max_stab,
        value,
    })
}

/// Σ_φ c_φ |φ⟩⟨φ| for a decomposition returned by the LP.
pub fn reconstruct(coefficients: &[f64], stab: &StabilizerStateSet) -> ComplexMatrix {
    let d = 1usize << stab.num_qubits();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (c, phi) in coefficients.iter().zip(stab.states()) {
        if *c != 0.0 {
            let a = phi.amplitudes();
            acc.add_scaled(num_complex::Complex64::new(*c, 0.0), &ComplexMatrix::outer(a, a));
        }
    }
    acc
}

/// −log₂ F_STAB(ψ) − 2m: a lower bound on the log-robustness of the state
/// left after tracing the last `m` qubits out of ψ. May be negative.
pub fn lr_lower_bound_from_purification(psi: &PureState, m: usize, stab: &StabilizerStateSet) -> Result<f64> {
    if m >= psi.num_qubits() {
        return Err(out_of_range(
            "traced qubits",
            format!("{m} leaves nothing of {}", psi.num_qubits()),
        ));
    }
    Ok(-stabilizer_fidelity(psi, stab)?.log2() - 2.0 * m as f64)
}

/// C(ρ) = S(Δ[ρ]) − S(ρ), in bits.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> f64 {
    let mut p = diagonal_probabilities(rho);
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let s_diag = shannon_entropy(&p).expect("diagonal of a density matrix is a distribution");
    (s_diag - von_neumann_entropy(rho)).max(0.0)
}

/// Coherent information S(ρ_A) − S(ρ) and its clamp at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HashingBound {
    pub raw: f64,
    pub certified: f64,
}

pub fn hashing_entanglement_bound(rho: &DensityMatrix, cut: Bipartition) -> Result<HashingBound> {
    if cut.total() != rho.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << cut.total(),
            got: rho.dim(),
        });
    }
    let s_a = von_neumann_entropy(&partial_trace(rho, cut.n_a())?);
    let raw = s_a - von_neumann_entropy(rho);
    Ok(HashingBound {
        raw,
        certified: raw.max(0.0),
    })
}
