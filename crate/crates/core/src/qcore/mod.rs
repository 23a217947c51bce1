//! Dense state primitives shared by every other module.
//!
//! Basis-state indexing puts qubit 0 in the most significant bit, so the
//! trailing qubits of a register are always the ones removed by
//! [`partial_trace`]. All entropies are in bits.

mod matrix;
mod pauli;

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

pub use matrix::{ComplexMatrix, ONE, ZERO};
pub use pauli::PauliString;

use crate::error::{out_of_range, Error, Result};

/// Entrywise tolerance for structural invariants (Hermiticity, trace, norm).
pub const STRUCT_TOL: f64 = 1e-10;
/// Tolerance for derived numerical identities.
pub const DERIVED_TOL: f64 = 1e-8;
/// Smallest eigenvalue accepted for a density matrix.
pub const PSD_SLACK: f64 = 1e-8;
/// Eigenvalues below this are treated as exact zeros in entropies.
pub const EIGEN_CLAMP: f64 = 1e-12;
pub const DEFAULT_MAX_QUBITS: usize = 14;

// Above this dimension the debug-only PSD check is skipped.
const DEBUG_PSD_CHECK_MAX_DIM: usize = 256;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Current limit on total qubits for dense objects.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

pub fn set_max_qubits(limit: usize) {
    MAX_QUBITS.store(limit, Ordering::Relaxed);
}

pub fn check_qubits(requested: usize) -> Result<()> {
    let limit = max_qubits();
    if requested > limit {
        Err(Error::QubitLimit { requested, limit })
    } else {
        Ok(())
    }
}

fn qubits_of_dim(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// Unit-norm state vector on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_of_dim(amplitudes.len())
            .ok_or_else(|| Error::MalformedState(format!("length {} is not a power of two", amplitudes.len())))?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > STRUCT_TOL {
            return Err(Error::MalformedState(format!("norm {norm} is not 1")));
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::MalformedState("cannot normalize a zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(out_of_range("basis index", format!("{index} >= {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self {
            num_qubits,
            amplitudes: amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_qubits(self.num_qubits + other.num_qubits)?;
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Ok(PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes: amps,
        })
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_parts(
            self.num_qubits,
            ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        )
    }

    /// Reduced state on the leading `keep` qubits, computed without forming
    /// the full projector.
    pub fn reduce(&self, keep: usize) -> Result<DensityMatrix> {
        if keep == 0 || keep > self.num_qubits {
            return Err(out_of_range(
                "kept qubits",
                format!("{keep} not in 1..={}", self.num_qubits),
            ));
        }
        let d_keep = 1usize << keep;
        let d_tr = 1usize << (self.num_qubits - keep);
        let a = &self.amplitudes;
        let mut out = ComplexMatrix::zeros(d_keep, d_keep);
        for i in 0..d_keep {
            let row_i = &a[i * d_tr..(i + 1) * d_tr];
            for j in i..d_keep {
                let row_j = &a[j * d_tr..(j + 1) * d_tr];
                let v: Complex64 = row_i.iter().zip(row_j).map(|(x, y)| x * y.conj()).sum();
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Ok(DensityMatrix::from_parts(keep, out))
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        let m = rho.matrix();
        if m.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: m.rows(),
            });
        }
        let v = m.mul_vec(&self.amplitudes)?;
        let e: Complex64 = self.amplitudes.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        Ok(e.re)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates every density-matrix invariant.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::MalformedState("matrix is not square".into()));
        }
        let n = qubits_of_dim(matrix.rows())
            .ok_or_else(|| Error::MalformedState(format!("dimension {} is not a power of two", matrix.rows())))?;
        check_qubits(n)?;
        if !matrix.is_finite() {
            return Err(Error::MalformedState("non-finite entry".into()));
        }
        if !matrix.is_hermitian(STRUCT_TOL) {
            return Err(Error::MalformedState("matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCT_TOL || tr.im.abs() > STRUCT_TOL {
            return Err(Error::MalformedState(format!("trace {tr} is not 1")));
        }
        let min_eig = matrix.eigvalsh().first().copied().unwrap_or(0.0);
        if min_eig < -PSD_SLACK {
            return Err(Error::MalformedState(format!("negative eigenvalue {min_eig}")));
        }
        Ok(Self { num_qubits: n, matrix })
    }

    /// Wraps a matrix produced by an operation known to preserve the
    /// invariants; they are re-checked only in debug builds.
    pub(crate) fn from_parts(num_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), 1usize << num_qubits);
        debug_assert!(matrix.is_hermitian(1e-9), "non-Hermitian density matrix");
        debug_assert!((matrix.trace().re - 1.0).abs() < 1e-9, "trace {} != 1", matrix.trace());
        debug_assert!(
            matrix.rows() > DEBUG_PSD_CHECK_MAX_DIM || matrix.eigvalsh()[0] >= -PSD_SLACK,
            "density matrix is not PSD"
        );
        Self { num_qubits, matrix }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let d = 1usize << num_qubits;
        Ok(Self::from_parts(
            num_qubits,
            ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        ))
    }

    pub fn basis_projector(num_qubits: usize, index: usize) -> Result<Self> {
        Ok(PureState::basis(num_qubits, index)?.projector())
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        validate_distribution(probs)?;
        let diag: Vec<Complex64> = probs.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        Self::new(ComplexMatrix::from_diagonal(&diag))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eigvalsh()
    }

    /// Conjugates by a unitary: UρU†.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.rows() != self.dim() || !unitary.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: unitary.rows(),
            });
        }
        Ok(Self::from_parts(self.num_qubits, self.matrix.conjugate_by(unitary)?))
    }

    /// Convex mixture Σ wᵢ ρᵢ. Weights must form a distribution.
    pub fn mixture<'a>(parts: impl IntoIterator<Item = (f64, &'a DensityMatrix)>) -> Result<Self> {
        let mut acc: Option<(usize, ComplexMatrix)> = None;
        let mut total = 0.0;
        for (w, rho) in parts {
            if w < 0.0 {
                return Err(Error::InvalidDistribution(format!("negative weight {w}")));
            }
            total += w;
            match &mut acc {
                None => acc = Some((rho.num_qubits, rho.matrix.scale_real(w))),
                Some((n, m)) => {
                    if *n != rho.num_qubits {
                        return Err(Error::DimensionMismatch {
                            expected: 1 << *n,
                            got: rho.dim(),
                        });
                    }
                    m.add_scaled(Complex64::new(w, 0.0), &rho.matrix);
                }
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        let (n, m) = acc.ok_or_else(|| Error::InvalidDistribution("empty mixture".into()))?;
        Ok(Self::from_parts(n, m))
    }

    /// If the state is rank one, returns its vector (up to global phase).
    pub fn as_pure(&self) -> Option<PureState> {
        if (purity(self) - 1.0).abs() > 1e-9 {
            return None;
        }
        let (_, vecs) = self.matrix.eigh();
        let last = self.dim() - 1;
        let amps: Vec<Complex64> = (0..self.dim()).map(|r| vecs[(r, last)]).collect();
        PureState::normalized(amps).ok()
    }
}

/// Qubit split A|B with A the leading qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bipartition {
    n_a: usize,
    n_b: usize,
}

impl Bipartition {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(out_of_range("bipartition", format!("{n_a}|{n_b} has an empty side")));
        }
        Ok(Self { n_a, n_b })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn total(&self) -> usize {
        self.n_a + self.n_b
    }
}

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let n = a.num_qubits + b.num_qubits;
    check_qubits(n)?;
    Ok(DensityMatrix::from_parts(n, a.matrix.kron(&b.matrix)))
}

/// Traces out the trailing `n - keep_leading` qubits.
pub fn partial_trace(rho: &DensityMatrix, keep_leading: usize) -> Result<DensityMatrix> {
    let n = rho.num_qubits;
    if keep_leading == 0 || keep_leading > n {
        return Err(out_of_range("kept qubits", format!("{keep_leading} not in 1..={n}")));
    }
    let d_keep = 1usize << keep_leading;
    let d_tr = 1usize << (n - keep_leading);
    let m = &rho.matrix;
    let out = ComplexMatrix::from_fn(d_keep, d_keep, |i, j| {
        (0..d_tr).map(|l| m[(i * d_tr + l, j * d_tr + l)]).sum()
    });
    Ok(DensityMatrix::from_parts(keep_leading, out))
}

/// Half the trace norm of the difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let diff = &a.matrix - &b.matrix;
    let td = 0.5 * diff.eigvalsh().iter().map(|v| v.abs()).sum::<f64>();
    Ok(td.clamp(0.0, 1.0))
}

/// Fidelity ⟨ψ|ρ|ψ⟩ where one argument is the pure state |ψ⟩⟨ψ|.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    if let Some(psi) = a.as_pure() {
        return Ok(psi.expectation(b)?.clamp(0.0, 1.0));
    }
    if let Some(psi) = b.as_pure() {
        return Ok(psi.expectation(a)?.clamp(0.0, 1.0));
    }
    Err(Error::NotPure)
}

fn entropy_of_spectrum(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter()
        .map(|v| v.clamp(0.0, 1.0))
        .filter(|&v| v > EIGEN_CLAMP)
        .map(|v| -v * v.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(rho.eigenvalues())
}

/// tr(ρ²), computed as the squared Frobenius norm of the Hermitian matrix.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Full dephasing in the computational basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let diag: Vec<Complex64> = rho
        .matrix
        .diagonal()
        .iter()
        .map(|z| Complex64::new(z.re, 0.0))
        .collect();
    DensityMatrix::from_parts(rho.num_qubits, ComplexMatrix::from_diagonal(&diag))
}

/// Diagonal of ρ as a probability vector.
pub fn diagonal_probabilities(rho: &DensityMatrix) -> Vec<f64> {
    rho.matrix.diagonal().iter().map(|z| z.re.max(0.0)).collect()
}

pub fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(bad) = p.iter().find(|&&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(())
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    validate_distribution(p)?;
    Ok(p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0))
}
