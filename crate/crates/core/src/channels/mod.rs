//! Unital noise channels: depolarizing (global and per-qubit), dephasing,
//! general mixed-unitary and Kraus channels.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{out_of_range, Error, Result};
use crate::qcore::{check_qubits, dephase, shannon_entropy, ComplexMatrix, DensityMatrix, PauliString};

/// A completely positive trace-preserving map on `num_qubits` qubits.
pub trait QuantumChannel: Send + Sync {
    fn num_qubits(&self) -> usize;
    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix>;
}

fn check_input(expected_qubits: usize, rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != expected_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << expected_qubits,
            got: rho.dim(),
        });
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(out_of_range("probability", format!("{p} not in [0, 1]")));
    }
    Ok(())
}

/// Unitary term of a mixed-unitary channel. Pauli strings are kept
/// symbolic so that large Pauli mixtures stay cheap.
#[derive(Clone, Debug, PartialEq)]
pub enum Unitary {
    Dense(ComplexMatrix),
    Pauli(PauliString),
}

impl Unitary {
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        match self {
            Unitary::Dense(m) => Ok(m.clone()),
            Unitary::Pauli(p) => p.matrix(),
        }
    }

    fn conjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            Unitary::Dense(u) => m.conjugate_by(u),
            Unitary::Pauli(p) => p.conjugate(m),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Unitary::Dense(m) => m.rows(),
            Unitary::Pauli(p) => 1 << p.num_qubits(),
        }
    }
}

/// Φ(ρ) = Σ_i p_i U_i ρ U_i†.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedUnitaryChannel {
    num_qubits: usize,
    terms: Vec<(f64, Unitary)>,
}

impl MixedUnitaryChannel {
    pub fn new(num_qubits: usize, terms: Vec<(f64, Unitary)>) -> Result<Self> {
        check_qubits(num_qubits)?;
        if terms.is_empty() {
            return Err(Error::InvalidChannel("no terms".into()));
        }
        let probs: Vec<f64> = terms.iter().map(|(p, _)| *p).collect();
        crate::qcore::validate_distribution(&probs)?;
        for (_, u) in &terms {
            if u.dim() != 1 << num_qubits {
                return Err(Error::DimensionMismatch {
                    expected: 1 << num_qubits,
                    got: u.dim(),
                });
            }
            if let Unitary::Dense(m) = u {
                if !m.is_unitary(1e-9) {
                    return Err(Error::InvalidChannel("term is not unitary".into()));
                }
            }
        }
        Ok(Self { num_qubits, terms })
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        Self::new(
            num_qubits,
            vec![(1.0, Unitary::Pauli(PauliString::identity(num_qubits)))],
        )
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let n = u.rows().trailing_zeros() as usize;
        Self::new(n, vec![(1.0, Unitary::Dense(u))])
    }

    pub fn terms(&self) -> &[(f64, Unitary)] {
        &self.terms
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.terms.iter().map(|(p, _)| *p).collect()
    }
}

impl QuantumChannel for MixedUnitaryChannel {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_input(self.num_qubits, rho)?;
        let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
        for (p, u) in &self.terms {
            acc.add_scaled(Complex64::new(*p, 0.0), &u.conjugate(rho.matrix())?);
        }
        Ok(DensityMatrix::from_parts(self.num_qubits, acc))
    }
}

/// Φ(ρ) = Σ_i K_i ρ K_i†.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    num_qubits: usize,
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.rows();
        if !d.is_power_of_two() {
            return Err(Error::InvalidChannel(format!("dimension {d} is not a power of two")));
        }
        let num_qubits = d.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &kraus_ops {
            if k.rows() != d || k.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: k.rows(),
                });
            }
            sum = &sum + &k.adjoint().matmul(k)?;
        }
        if !sum.approx_eq(&ComplexMatrix::identity(d), 1e-9) {
            return Err(Error::InvalidChannel("Kraus operators are not trace preserving".into()));
        }
        Ok(Self { num_qubits, kraus_ops })
    }

    /// Single-qubit amplitude damping: K₀ = diag(1, √(1−γ)), K₁ = √γ |0⟩⟨1|.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        check_probability(gamma)?;
        let z = Complex64::new(0.0, 0.0);
        let k0 = ComplexMatrix::from_diagonal(&[Complex64::new(1.0, 0.0), Complex64::new((1.0 - gamma).sqrt(), 0.0)]);
        let k1 = ComplexMatrix::from_row_major(2, 2, vec![z, Complex64::new(gamma.sqrt(), 0.0), z, z])?;
        Self::new(vec![k0, k1])
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }
}

impl QuantumChannel for KrausChannel {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_input(self.num_qubits, rho)?;
        let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
        for k in &self.kraus_ops {
            acc = &acc + &rho.matrix().conjugate_by(k)?;
        }
        Ok(DensityMatrix::from_parts(self.num_qubits, acc))
    }
}

/// Λ_p(ρ) = (1−p)ρ + p I/2^n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlobalDepolarizing {
    num_qubits: usize,
    p: f64,
}

pub fn depolarizing_global(n: usize, p: f64) -> Result<GlobalDepolarizing> {
    check_probability(p)?;
    Ok(GlobalDepolarizing { num_qubits: n, p })
}

/// Explicit Pauli expansions are limited to 4^6 terms.
pub const MAX_EXPLICIT_PAULI_QUBITS: usize = 6;

fn check_explicit(n: usize) -> Result<()> {
    if n > MAX_EXPLICIT_PAULI_QUBITS {
        return Err(out_of_range(
            "explicit Pauli expansion",
            format!("4^{n} terms; use the factored channel instead"),
        ));
    }
    Ok(())
}

impl GlobalDepolarizing {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The same map as a Pauli mixture: I with weight 1 − p + p/d², every
    /// other string with weight p/d².
    pub fn to_mixed_unitary(&self) -> Result<MixedUnitaryChannel> {
        check_explicit(self.num_qubits)?;
        let d2 = 4f64.powi(self.num_qubits as i32);
        let terms = PauliString::all(self.num_qubits)
            .map(|p| {
                let w = if p.is_identity() {
                    1.0 - self.p + self.p / d2
                } else {
                    self.p / d2
                };
                (w, Unitary::Pauli(p))
            })
            .filter(|(w, _)| *w > 0.0)
            .collect();
        MixedUnitaryChannel::new(self.num_qubits, terms)
    }
}

impl QuantumChannel for GlobalDepolarizing {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_input(self.num_qubits, rho)?;
        let d = rho.dim();
        let mut out = rho.matrix().scale_real(1.0 - self.p);
        out.add_scaled(Complex64::new(self.p / d as f64, 0.0), &ComplexMatrix::identity(d));
        Ok(DensityMatrix::from_parts(self.num_qubits, out))
    }
}

/// Single-qubit depolarizing probabilities {1−3p/4, p/4, p/4, p/4} for I, X, Y, Z.
pub fn single_qubit_depolarizing_probs(p: f64) -> [f64; 4] {
    [1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p]
}

/// Independent depolarizing of every qubit as an explicit mixture of 4^n
/// Pauli strings with product probabilities. Zero-weight terms are dropped.
pub fn depolarizing_local(n: usize, p: f64) -> Result<MixedUnitaryChannel> {
    check_probability(p)?;
    check_explicit(n)?;
    let single = single_qubit_depolarizing_probs(p);
    let terms = PauliString::all(n)
        .map(|pauli| {
            let w: f64 = (0..n)
                .map(|q| {
                    let bit = 1u64 << (n - 1 - q);
                    let letter = match (pauli.x_bits() & bit != 0, pauli.z_bits() & bit != 0) {
                        (false, false) => 0,
                        (true, false) => 1,
                        (true, true) => 2,
                        (false, true) => 3,
                    };
                    single[letter]
                })
                .product();
            (w, Unitary::Pauli(pauli))
        })
        .filter(|(w, _)| *w > 0.0)
        .collect();
    MixedUnitaryChannel::new(n, terms)
}

/// The per-qubit depolarizing channel applied qubit by qubit, without
/// enumerating Pauli strings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalDepolarizing {
    num_qubits: usize,
    p: f64,
}

pub fn local_depolarizing_factored(n: usize, p: f64) -> Result<LocalDepolarizing> {
    check_probability(p)?;
    Ok(LocalDepolarizing { num_qubits: n, p })
}

impl LocalDepolarizing {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// n·H({1−3p/4, p/4, p/4, p/4}), the entropy of the equivalent Pauli mixture.
    pub fn entropy(&self) -> f64 {
        local_depolarizing_entropy(self.num_qubits, self.p)
    }
}

impl QuantumChannel for LocalDepolarizing {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_input(self.num_qubits, rho)?;
        let n = self.num_qubits;
        let d = rho.dim();
        let keep = 1.0 - self.p;
        let half_p = 0.5 * self.p;
        let mut m = rho.matrix().clone();
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            for r in (0..d).filter(|r| r & bit == 0) {
                for c in (0..d).filter(|c| c & bit == 0) {
                    let b00 = m[(r, c)];
                    let b11 = m[(r | bit, c | bit)];
                    let avg = (b00 + b11) * half_p;
                    m[(r, c)] = b00 * keep + avg;
                    m[(r | bit, c | bit)] = b11 * keep + avg;
                    m[(r, c | bit)] *= keep;
                    m[(r | bit, c)] *= keep;
                }
            }
        }
        Ok(DensityMatrix::from_parts(n, m))
    }
}

/// Full computational-basis dephasing Δ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dephasing {
    num_qubits: usize,
}

pub fn dephasing(n: usize) -> Dephasing {
    Dephasing { num_qubits: n }
}

impl Dephasing {
    /// Δ as the uniform mixture of all 2^n Z-strings.
    pub fn to_mixed_unitary(&self) -> Result<MixedUnitaryChannel> {
        if self.num_qubits > 2 * MAX_EXPLICIT_PAULI_QUBITS {
            return Err(out_of_range(
                "explicit Z-string expansion",
                format!("2^{} terms", self.num_qubits),
            ));
        }
        let d = 1u64 << self.num_qubits;
        let w = 1.0 / d as f64;
        let terms = (0..d)
            .map(|z| Ok((w, Unitary::Pauli(PauliString::new(self.num_qubits, 0, z)?))))
            .collect::<Result<Vec<_>>>()?;
        MixedUnitaryChannel::new(self.num_qubits, terms)
    }
}

impl QuantumChannel for Dephasing {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_input(self.num_qubits, rho)?;
        Ok(dephase(rho))
    }
}

/// Shannon entropy of the mixing probabilities, in bits.
pub fn channel_entropy(channel: &MixedUnitaryChannel) -> f64 {
    shannon_entropy(&channel.probabilities()).expect("channel probabilities are validated")
}

/// n·H({1−3p/4, p/4, p/4, p/4}) without building the 4^n-term channel.
pub fn local_depolarizing_entropy(n: usize, p: f64) -> f64 {
    let h: f64 = single_qubit_depolarizing_probs(p)
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum();
    n as f64 * h
}

/// Whether the channel maps I/2^n to itself within `tol` (entrywise).
pub fn is_unital(channel: &dyn QuantumChannel, tol: f64) -> Result<bool> {
    let mixed = DensityMatrix::maximally_mixed(channel.num_qubits())?;
    Ok(channel.apply(&mixed)?.matrix().approx_eq(mixed.matrix(), tol))
}

pub type SharedChannel = Arc<dyn QuantumChannel>;
