use std::fmt;

use num_complex::Complex64;

use super::{check_qubits, ComplexMatrix, DensityMatrix, PureState};
use crate::error::{out_of_range, Error, Result};

/// Unsigned Pauli string i^{|x∧z|} X^x Z^z.
///
/// Bit `n-1-q` of each mask refers to qubit `q`, matching basis-index order.
/// The phase makes every string Hermitian (X·Z carries −i, so the pair
/// x = z = 1 is exactly Y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    num_qubits: usize,
    x_bits: u64,
    z_bits: u64,
}

impl PauliString {
    pub fn new(num_qubits: usize, x_bits: u64, z_bits: u64) -> Result<Self> {
        if num_qubits > 32 || (x_bits | z_bits) >> num_qubits != 0 {
            return Err(out_of_range(
                "Pauli masks",
                format!("do not fit in {num_qubits} qubits"),
            ));
        }
        Ok(Self {
            num_qubits,
            x_bits,
            z_bits,
        })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            x_bits: 0,
            z_bits: 0,
        }
    }

    /// Parses labels such as "XIZY"; the first letter is qubit 0.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in label.chars().enumerate() {
            let bit = 1u64 << (n - 1 - q);
            match ch {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => return Err(Error::Config(format!("bad Pauli letter {other:?}"))),
            }
        }
        Self::new(n, x, z)
    }

    /// All 4^n strings, ordered by (x, z).
    pub fn all(num_qubits: usize) -> impl Iterator<Item = PauliString> {
        let d = 1u64 << num_qubits;
        (0..d).flat_map(move |x| {
            (0..d).map(move |z| PauliString {
                num_qubits,
                x_bits: x,
                z_bits: z,
            })
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x_bits | self.z_bits).count_ones()
    }

    fn phase(&self) -> Complex64 {
        match (self.x_bits & self.z_bits).count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    fn sign(&self, j: usize) -> f64 {
        if (self.z_bits & j as u64).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        check_qubits(self.num_qubits)?;
        let d = 1usize << self.num_qubits;
        let ph = self.phase();
        let mut out = ComplexMatrix::zeros(d, d);
        for j in 0..d {
            out[(j ^ self.x_bits as usize, j)] = ph * self.sign(j);
        }
        Ok(out)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != 1usize << self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                got: dim,
            });
        }
        Ok(())
    }

    /// ⟨ψ|P|ψ⟩ (real for Hermitian P).
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        self.check_dim(psi.dim())?;
        let a = psi.amplitudes();
        let x = self.x_bits as usize;
        let s: Complex64 = (0..a.len()).map(|j| a[j ^ x].conj() * a[j] * self.sign(j)).sum();
        Ok((s * self.phase()).re)
    }

    /// tr(Pρ).
    pub fn expectation_mixed(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check_dim(rho.dim())?;
        let m = rho.matrix();
        let x = self.x_bits as usize;
        let s: Complex64 = (0..rho.dim()).map(|j| m[(j, j ^ x)] * self.sign(j)).sum();
        Ok((s * self.phase()).re)
    }

    /// P M P for a square matrix M of matching size.
    pub fn conjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(m.rows())?;
        let x = self.x_bits as usize;
        Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |a, b| {
            m[(a ^ x, b ^ x)] * (self.sign(a) * self.sign(b))
        }))
    }

    /// P|ψ⟩
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        self.check_dim(psi.dim())?;
        let a = psi.amplitudes();
        let x = self.x_bits as usize;
        let ph = self.phase();
        let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
        for (j, &amp) in a.iter().enumerate() {
            out[j ^ x] = amp * ph * self.sign(j);
        }
        PureState::new(out)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.num_qubits {
            let bit = 1u64 << (self.num_qubits - 1 - q);
            let ch = match (self.x_bits & bit != 0, self.z_bits & bit != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_matrices() {
        let y = PauliString::from_label("Y").unwrap().matrix().unwrap();
        let expected =
            ComplexMatrix::from_row_major(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(y, expected);
        let z = PauliString::from_label("Z").unwrap().matrix().unwrap();
        assert_eq!(z[(1, 1)], c(-1.0, 0.0));
    }

    #[test]
    fn label_roundtrip_and_ordering() {
        let p = PauliString::from_label("XIZY").unwrap();
        assert_eq!(p.to_string(), "XIZY");
        assert_eq!(p.weight(), 3);
        let xz = PauliString::from_label("XZ").unwrap().matrix().unwrap();
        let kron = PauliString::from_label("X")
            .unwrap()
            .matrix()
            .unwrap()
            .kron(&PauliString::from_label("Z").unwrap().matrix().unwrap());
        assert_eq!(xz, kron);
        assert_eq!(PauliString::all(2).count(), 16);
    }

    #[test]
    fn every_string_is_hermitian_and_unitary() {
        for p in PauliString::all(2) {
            let m = p.matrix().unwrap();
            assert!(m.is_hermitian(0.0));
            assert!(m.is_unitary(1e-15));
        }
    }

    #[test]
    fn fast_paths_match_dense() {
        let psi = PureState::normalized((0..8).map(|k| c(k as f64 - 2.5, (k * k) as f64 * 0.1)).collect()).unwrap();
        let rho = psi.projector();
        for p in PauliString::all(3) {
            let m = p.matrix().unwrap();
            let dense = rho.matrix().trace_product(&m).unwrap().re;
            assert!((p.expectation(&psi).unwrap() - dense).abs() < 1e-12);
            assert!((p.expectation_mixed(&rho).unwrap() - dense).abs() < 1e-12);
            let conj = m.matmul(rho.matrix()).unwrap().matmul(&m).unwrap();
            assert!(p.conjugate(rho.matrix()).unwrap().approx_eq(&conj, 1e-14));
            let applied = m.mul_vec(psi.amplitudes()).unwrap();
            assert!(p
                .apply(&psi)
                .unwrap()
                .amplitudes()
                .iter()
                .zip(&applied)
                .all(|(a, b)| (a - b).norm() < 1e-14));
        }
    }

    #[test]
    fn rejects_oversized_masks() {
        assert!(PauliString::new(2, 4, 0).is_err());
        assert!(PauliString::from_label("XQ").is_err());
    }
}
