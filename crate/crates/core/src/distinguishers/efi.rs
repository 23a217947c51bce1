//! Statistical gap between keyed-average PRDMs and the maximally mixed state,
//! and the entropy budget a mixed-unitary noise channel may spend.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{channel_entropy, local_depolarizing_entropy, MixedUnitaryChannel};
use crate::ensembles::RngSeed;
use crate::error::{out_of_range, Result};
use crate::pseudostates::{make_prdm, Key, PrfKind, PrfSpec, DEFAULT_POLY_DEGREE};
use crate::qcore::{trace_distance, von_neumann_entropy, ComplexMatrix, DensityMatrix};

pub const MAX_EXHAUSTIVE_KEY_BITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EfiGap {
    pub s0: f64,
    /// 1 − (S0 + 1)/n; vacuous when ≤ 0.
    pub fannes_lower_bound: f64,
    pub exact_td: f64,
}

impl EfiGap {
    pub fn is_vacuous(&self) -> bool {
        self.fannes_lower_bound <= 0.0
    }
}

/// Entropy of ν₀, the Fannes-type lower bound on its distance from I/2^n,
/// and that distance computed exactly.
pub fn efi_gap(nu0: &DensityMatrix) -> Result<EfiGap> {
    let n = nu0.num_qubits();
    let s0 = von_neumann_entropy(nu0);
    let mixed = DensityMatrix::maximally_mixed(n)?;
    Ok(EfiGap {
        s0,
        fannes_lower_bound: 1.0 - (s0 + 1.0) / n as f64,
        exact_td: trace_distance(nu0, &mixed)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeyAverage {
    pub state: DensityMatrix,
    pub keys: u64,
    pub exhaustive: bool,
    /// Largest entrywise standard error of the mean; zero when exhaustive.
    pub entry_std_error: f64,
}

fn spec_for(kind: PrfKind, bits: usize) -> PrfSpec {
    match kind {
        PrfKind::KeyedHash => PrfSpec::keyed_hash(bits),
        PrfKind::Polynomial => PrfSpec::polynomial(bits, DEFAULT_POLY_DEGREE),
    }
}

/// Average of `make_prdm` over κ-bit keys: every key when κ ≤ 12, otherwise
/// `samples` uniformly random keys drawn from `seed`.
pub fn prdm_key_average(
    kind: PrfKind,
    n: usize,
    m: usize,
    kappa: usize,
    samples: usize,
    seed: RngSeed,
) -> Result<KeyAverage> {
    if kappa == 0 {
        return Err(out_of_range("key bits", "need at least one key bit"));
    }
    let spec = spec_for(kind, n + m);
    let exhaustive = kappa <= MAX_EXHAUSTIVE_KEY_BITS;
    let keys: Vec<Key> = if exhaustive {
        (0..1u64 << kappa)
            .map(|i| Key::from_index(i, kappa))
            .collect::<Result<_>>()?
    } else {
        if samples < 2 {
            return Err(out_of_range("samples", "Monte Carlo averaging needs at least two keys"));
        }
        let mut rng = seed.rng();
        (0..samples)
            .map(|_| Key::random(kappa, &mut rng))
            .collect::<Result<_>>()?
    };
    let d = 1usize << n;
    let mut sum = ComplexMatrix::zeros(d, d);
    let mut sum_sq = vec![0.0; d * d];
    for key in &keys {
        let rho = make_prdm(key, spec, n, m)?;
        sum.add_scaled(Complex64::new(1.0, 0.0), rho.matrix());
        if !exhaustive {
            for (acc, z) in sum_sq.iter_mut().zip(rho.matrix().as_slice()) {
                *acc += z.norm_sqr();
            }
        }
    }
    let count = keys.len() as f64;
    let mean = sum.scale_real(1.0 / count);
    let entry_std_error = if exhaustive {
        0.0
    } else {
        mean.as_slice()
            .iter()
            .zip(&sum_sq)
            .map(|(mu, sq)| ((sq / count - mu.norm_sqr()).max(0.0) * count / (count - 1.0) / count).sqrt())
            .fold(0.0, f64::max)
    };
    Ok(KeyAverage {
        state: DensityMatrix::new(mean)?,
        keys: keys.len() as u64,
        exhaustive,
        entry_std_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub h: f64,
    pub budget: f64,
    pub robust: bool,
}

/// Compares a noise entropy `h` with the budget n(1−c) − m − 2.
pub fn efi_noise_budget_from_entropy(n: usize, m: usize, c: f64, h: f64) -> Result<NoiseBudget> {
    if !(c > 0.0 && c < 1.0) {
        return Err(out_of_range("key-rate constant", format!("{c} not in (0, 1)")));
    }
    let budget = n as f64 * (1.0 - c) - m as f64 - 2.0;
    Ok(NoiseBudget {
        h,
        budget,
        robust: h <= budget,
    })
}

pub fn efi_noise_budget(n: usize, m: usize, c: f64, channel: &MixedUnitaryChannel) -> Result<NoiseBudget> {
    efi_noise_budget_from_entropy(n, m, c, channel_entropy(channel))
}

/// Depolarizing strength at which the per-qubit depolarizing entropy of n
/// qubits meets the budget, by bisection. The entropy is increasing in p, so
/// every smaller p is robust.
pub fn critical_local_depolarizing_p(n: usize, m: usize, c: f64) -> Result<f64> {
    let budget = efi_noise_budget_from_entropy(n, m, c, 0.0)?.budget;
    if budget < 0.0 {
        return Ok(0.0);
    }
    if local_depolarizing_entropy(n, 1.0) <= budget {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if local_depolarizing_entropy(n, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing_local;
    use crate::qcore::PureState;

    #[test]
    fn pure_and_mixed_extremes() {
        for n in 1..5 {
            let g = efi_gap(&PureState::basis(n, 0).unwrap().projector()).unwrap();
            assert!(g.s0.abs() < 1e-10);
            assert!((g.fannes_lower_bound - (1.0 - 1.0 / n as f64)).abs() < 1e-10);
            assert!((g.exact_td - (1.0 - 2f64.powi(-(n as i32)))).abs() < 1e-10);
            let g = efi_gap(&DensityMatrix::maximally_mixed(n).unwrap()).unwrap();
            assert!((g.fannes_lower_bound + 1.0 / n as f64).abs() < 1e-10);
            assert!(g.exact_td < 1e-12);
            assert!(g.is_vacuous());
        }
    }

    #[test]
    fn exhaustive_average_counts_keys() {
        let avg = prdm_key_average(PrfKind::KeyedHash, 3, 1, 4, 0, RngSeed::new(0, 0)).unwrap();
        assert!(avg.exhaustive);
        assert_eq!(avg.keys, 16);
        assert_eq!(avg.entry_std_error, 0.0);
        let diag = avg.state.matrix().diagonal();
        assert!(diag.iter().all(|z| (z.re - 0.125).abs() < 1e-15));
    }

    #[test]
    fn sampled_average_reports_error() {
        let avg = prdm_key_average(PrfKind::KeyedHash, 2, 1, 20, 64, RngSeed::new(1, 0)).unwrap();
        assert!(!avg.exhaustive);
        assert_eq!(avg.keys, 64);
        assert!(avg.entry_std_error > 0.0 && avg.entry_std_error < 0.1);
    }

    #[test]
    fn identity_channel_has_no_entropy() {
        let id = MixedUnitaryChannel::identity(3).unwrap();
        let b = efi_noise_budget(10, 1, 0.1, &id).unwrap();
        assert_eq!(b.h, 0.0);
        assert!(b.robust);
        assert!((b.budget - 6.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_and_symbolic_local_depolarizing_agree() {
        let ch = depolarizing_local(3, 0.25).unwrap();
        let b = efi_noise_budget(3, 0, 0.5, &ch).unwrap();
        assert!((b.h - local_depolarizing_entropy(3, 0.25)).abs() < 1e-10);
    }

    #[test]
    fn key_rate_constant_is_checked() {
        assert!(efi_noise_budget_from_entropy(10, 1, 0.0, 0.0).is_err());
        assert!(efi_noise_budget_from_entropy(10, 1, 1.0, 0.0).is_err());
    }

    #[test]
    fn critical_p_extremes() {
        assert_eq!(critical_local_depolarizing_p(2, 5, 0.5).unwrap(), 0.0);
        let p = critical_local_depolarizing_p(100, 10, 1e-4).unwrap();
        let budget = 100.0 * (1.0 - 1e-4) - 12.0;
        assert!((local_depolarizing_entropy(100, p) - budget).abs() < 1e-9);
    }
}
