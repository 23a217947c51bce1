//! Haar and GHSE sampling, exact t-copy moments, and their distance to the
//! maximally mixed state.

mod moments;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result};
use crate::qcore::{check_qubits, ComplexMatrix, DensityMatrix, PureState};

pub use moments::{
    cycle_count, ghse_moment_exact, haar_moment_exact, moment_td_envelope, permutation_operator, permutations,
    td_ghse_to_mixed,
};

/// Identifies one reproducible random stream.
///
/// The pair `(master_seed, stream_index)` fixes every draw; trial `i` of an
/// experiment conventionally uses `stream_index = i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A child seed for a sub-task of this stream. Distinct tags give
    /// independent streams; the parent stream is unaffected.
    pub fn derive(&self, tag: u64) -> Self {
        Self {
            master_seed: splitmix(self.master_seed ^ splitmix(self.stream_index)),
            stream_index: tag,
        }
    }
}

/// Visible qubits `n` and traced-out qubits `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhseParams {
    n: usize,
    m: usize,
}

impl GhseParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(out_of_range("visible qubits", "n must be at least 1"));
        }
        check_qubits(n + m)?;
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Complex Gaussian with E|z|² = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn haar_state_from_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    check_qubits(n)?;
    let amps = (0..1usize << n).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(amps)
}

pub fn sample_haar_state(n: usize, seed: RngSeed) -> Result<PureState> {
    haar_state_from_rng(n, &mut seed.rng())
}

/// ρ = XX†/tr(XX†) for a 2^n × 2^m Ginibre matrix X, i.e. the reduction of a
/// Haar state on n+m qubits.
pub fn sample_ghse(params: GhseParams, seed: RngSeed) -> Result<DensityMatrix> {
    sample_haar_state(params.n + params.m, seed)?.reduce(params.n)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary_from_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    g.qr_unitary()
}

pub fn sample_haar_unitary(n: usize, seed: RngSeed) -> Result<ComplexMatrix> {
    check_qubits(n)?;
    Ok(haar_unitary_from_rng(1 << n, &mut seed.rng()))
}

/// E tr(ρ_A²) for the leading `n_a` qubits of a GHSE(n, m) state.
pub fn ghse_subsystem_purity(n: usize, m: usize, n_a: usize) -> f64 {
    let total = (n + m) as i32;
    (2f64.powi(n_a as i32) + 2f64.powi(total - n_a as i32)) / (2f64.powi(total) + 1.0)
}

/// E tr(Δ[ρ]²) for a GHSE(n, m) state.
pub fn ghse_diagonal_purity(n: usize, m: usize) -> f64 {
    (2f64.powi(m as i32) + 1.0) / (2f64.powi((n + m) as i32) + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{partial_trace, purity, STRUCT_TOL};

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = sample_haar_state(3, RngSeed::new(7, 2)).unwrap();
        let b = sample_haar_state(3, RngSeed::new(7, 2)).unwrap();
        let c = sample_haar_state(3, RngSeed::new(7, 3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(RngSeed::new(7, 2).derive(0), RngSeed::new(7, 3).derive(0));
    }

    #[test]
    fn haar_state_is_normalized() {
        for s in 0..20 {
            let psi = sample_haar_state(4, RngSeed::new(1, s)).unwrap();
            let norm: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < STRUCT_TOL);
        }
    }

    #[test]
    fn haar_matrix_element_mean() {
        let xs: Vec<f64> = (0..10_000)
            .map(|s| sample_haar_state(2, RngSeed::new(11, s)).unwrap().amplitudes()[0].norm_sqr())
            .collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 0.25).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn haar_reduced_purity_mean() {
        let xs: Vec<f64> = (0..4000)
            .map(|s| purity(&sample_haar_state(2, RngSeed::new(12, s)).unwrap().reduce(1).unwrap()))
            .collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 0.8).abs() < 4.0 * se, "{mean} ± {se}");
        assert_eq!(ghse_subsystem_purity(1, 1, 1), 0.8);
    }

    #[test]
    fn ghse_m0_is_pure() {
        let rho = sample_ghse(GhseParams::new(3, 0).unwrap(), RngSeed::new(3, 0)).unwrap();
        assert!((purity(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghse_rank_is_bounded() {
        let rho = sample_ghse(GhseParams::new(3, 1).unwrap(), RngSeed::new(3, 1)).unwrap();
        let nonzero = rho.eigenvalues().iter().filter(|&&v| v > 1e-10).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn ghse_mean_purity() {
        let p = GhseParams::new(2, 2).unwrap();
        let xs: Vec<f64> = (0..1000)
            .map(|s| purity(&sample_ghse(p, RngSeed::new(5, s)).unwrap()))
            .collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 8.0 / 17.0).abs() < 4.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn ghse_matches_haar_reduction_route() {
        // Route 1: sample_ghse; route 2: explicit projector + partial trace, separate streams.
        let p = GhseParams::new(2, 1).unwrap();
        let a: Vec<f64> = (0..1000)
            .map(|s| purity(&sample_ghse(p, RngSeed::new(21, s)).unwrap()))
            .collect();
        let b: Vec<f64> = (0..1000)
            .map(|s| {
                let psi = sample_haar_state(3, RngSeed::new(22, s)).unwrap();
                purity(&partial_trace(&psi.projector(), 2).unwrap())
            })
            .collect();
        let (ma, sa) = mean_and_se(&a);
        let (mb, sb) = mean_and_se(&b);
        assert!((ma - mb).abs() < 3.0 * (sa * sa + sb * sb).sqrt());
    }

    #[test]
    fn ghse_is_unitarily_invariant() {
        let p = GhseParams::new(2, 1).unwrap();
        let u = sample_haar_unitary(2, RngSeed::new(99, 0)).unwrap();
        let mut plain_elem = Vec::new();
        let mut rot_elem = Vec::new();
        let mut plain_pur = Vec::new();
        let mut rot_pur = Vec::new();
        for s in 0..1000 {
            let rho = sample_ghse(p, RngSeed::new(31, s)).unwrap();
            plain_elem.push(rho.matrix()[(0, 0)].re);
            plain_pur.push(purity(&rho));
            let rho2 = sample_ghse(p, RngSeed::new(32, s)).unwrap().evolve(&u).unwrap();
            rot_elem.push(rho2.matrix()[(0, 0)].re);
            rot_pur.push(purity(&rho2));
        }
        for (a, b) in [(plain_elem, rot_elem), (plain_pur, rot_pur)] {
            let (ma, sa) = mean_and_se(&a);
            let (mb, sb) = mean_and_se(&b);
            assert!((ma - mb).abs() < 3.0 * (sa * sa + sb * sb).sqrt(), "{ma} vs {mb}");
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = sample_haar_unitary(3, RngSeed::new(4, 4)).unwrap();
        assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn params_validation() {
        assert!(GhseParams::new(0, 2).is_err());
        assert!(GhseParams::new(10, 10).is_err());
    }
}
