//! Binary-phase pseudorandom states, the density matrices obtained by
//! tracing out part of them, and the verifiable keyed-circuit variant.

mod circuit;
mod prf;

use num_complex::Complex64;

use crate::error::{out_of_range, Error, Result};
use crate::qcore::{check_qubits, ComplexMatrix, DensityMatrix, PureState};

pub use circuit::{keyed_random_circuit, vprdm_make, vprdm_verify};
pub use prf::{
    derive_key, gf_mul, irreducible_modulus, prf_eval, Key, Prf, PrfKind, PrfSpec, DEFAULT_POLY_DEGREE, MAX_FIELD_BITS,
};

fn phase_signs(key: &Key, spec: PrfSpec, total_qubits: usize) -> Result<Vec<bool>> {
    if spec.domain_bits != total_qubits {
        return Err(Error::InputLength {
            expected: total_qubits,
            got: spec.domain_bits,
        });
    }
    check_qubits(total_qubits)?;
    Prf::new(key, spec)?.table()
}

/// 2^{-N/2} Σ_x (−1)^{f(x)} |x⟩ on N = `total_qubits` qubits. The PRF
/// domain must be exactly N bits.
pub fn binary_phase_state(key: &Key, spec: PrfSpec, total_qubits: usize) -> Result<PureState> {
    let signs = phase_signs(key, spec, total_qubits)?;
    let amp = 2f64.powf(-(total_qubits as f64) / 2.0);
    PureState::new(
        signs
            .iter()
            .map(|&s| Complex64::new(if s { -amp } else { amp }, 0.0))
            .collect(),
    )
}

/// Reduction of the binary-phase state on n+m qubits to its leading n.
///
/// Entries are formed as integer sign correlations scaled by 2^{-(n+m)}, so
/// the diagonal is exactly 2^{-n}.
pub fn make_prdm(key: &Key, spec: PrfSpec, n: usize, m: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(out_of_range("visible qubits", "n must be at least 1"));
    }
    let signs = phase_signs(key, spec, n + m)?;
    let d_keep = 1usize << n;
    let d_tr = 1usize << m;
    let scale = 2f64.powi(-((n + m) as i32));
    let mut out = ComplexMatrix::zeros(d_keep, d_keep);
    for i in 0..d_keep {
        for j in i..d_keep {
            let disagree = (0..d_tr)
                .filter(|&l| signs[i * d_tr + l] != signs[j * d_tr + l])
                .count() as i64;
            let v = Complex64::new((d_tr as i64 - 2 * disagree) as f64 * scale, 0.0);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    DensityMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::RngSeed;
    use crate::qcore::{partial_trace, purity};

    #[test]
    fn zero_polynomial_gives_uniform_superposition() {
        let spec = PrfSpec::polynomial(5, 7);
        let psi = binary_phase_state(&Key::zero(40).unwrap(), spec, 5).unwrap();
        let amp = 2f64.powf(-2.5);
        assert!(psi
            .amplitudes()
            .iter()
            .all(|a| (a.re - amp).abs() < 1e-15 && a.im == 0.0));
    }

    #[test]
    fn amplitudes_have_flat_modulus() {
        let key = Key::from_hex("beef", None).unwrap();
        let psi = binary_phase_state(&key, PrfSpec::keyed_hash(6), 6).unwrap();
        assert!(psi.amplitudes().iter().all(|a| a.re.abs() == 0.125 && a.im == 0.0));
        assert!(binary_phase_state(&key, PrfSpec::keyed_hash(6), 5).is_err());
    }

    #[test]
    fn prdm_diagonal_is_exactly_uniform() {
        let mut rng = RngSeed::new(2, 0).rng();
        for (n, m) in [(1, 2), (3, 2), (4, 1), (2, 3)] {
            for spec in [PrfSpec::keyed_hash(n + m), PrfSpec::polynomial(n + m, 7)] {
                let key = Key::random(n + m, &mut rng).unwrap();
                let rho = make_prdm(&key, spec, n, m).unwrap();
                let target = 2f64.powi(-(n as i32));
                for z in rho.matrix().diagonal() {
                    assert_eq!(z.re, target);
                }
            }
        }
    }

    #[test]
    fn prdm_m0_is_the_projector() {
        let key = Key::from_hex("1f", Some(8)).unwrap();
        let spec = PrfSpec::keyed_hash(3);
        let rho = make_prdm(&key, spec, 3, 0).unwrap();
        let proj = binary_phase_state(&key, spec, 3).unwrap().projector();
        assert!(rho.matrix().approx_eq(proj.matrix(), 1e-15));
        assert!((purity(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prdm_matches_partial_trace_route() {
        let mut rng = RngSeed::new(3, 0).rng();
        for _ in 0..10 {
            let key = Key::random(6, &mut rng).unwrap();
            let spec = PrfSpec::keyed_hash(6);
            let a = make_prdm(&key, spec, 4, 2).unwrap();
            let b = partial_trace(&binary_phase_state(&key, spec, 6).unwrap().projector(), 4).unwrap();
            assert!(a.matrix().approx_eq(b.matrix(), 1e-14));
            assert!(a.matrix().as_slice().iter().all(|z| z.im == 0.0));
        }
    }

    #[test]
    fn prdm_rank_is_bounded() {
        let key = Key::from_hex("76", Some(7)).unwrap();
        let rho = make_prdm(&key, PrfSpec::keyed_hash(5), 3, 2).unwrap();
        assert!(rho.eigenvalues().iter().filter(|&&v| v > 1e-10).count() <= 4);
    }
}
