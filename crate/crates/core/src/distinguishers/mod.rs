//! Hypothesis-testing harness: SWAP test and Helstrom probabilities, the
//! purity attack against noisy copies, memoryless single-copy learners, and
//! the EFI gap and noise-budget calculators.

mod efi;
mod memoryless;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::SharedChannel;
use crate::ensembles::{sample_ghse, sample_haar_state, GhseParams, RngSeed};
use crate::error::{out_of_range, Error, Result};
use crate::pseudostates::{make_prdm, Key, PrfKind, PrfSpec};
use crate::qcore::{trace_distance, DensityMatrix};

pub use efi::{
    critical_local_depolarizing_p, efi_gap, efi_noise_budget, efi_noise_budget_from_entropy, prdm_key_average, EfiGap,
    KeyAverage, NoiseBudget, MAX_EXHAUSTIVE_KEY_BITS,
};
pub use memoryless::{memoryless_sim, MeasurementPolicy, Policy, Transcript};

fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// Acceptance probability ½(1 + tr ρσ) of the SWAP test on ρ ⊗ σ.
pub fn swap_test_prob(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let overlap = rho.matrix().trace_product(sigma.matrix())?.re;
    Ok((0.5 * (1.0 + overlap)).clamp(0.0, 1.0))
}

/// Optimal single-copy discrimination probability ½(1 + TD(ρ, σ)).
pub fn helstrom_success(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok((0.5 * (1.0 + trace_distance(rho, sigma)?)).clamp(0.5, 1.0))
}

type Generator = dyn Fn(RngSeed) -> Result<DensityMatrix> + Send + Sync;

/// A labelled state ensemble. Sample `index` under `seed` is a pure function
/// of the pair.
#[derive(Clone)]
pub struct EnsembleSampler {
    label: String,
    num_qubits: usize,
    generator: Arc<Generator>,
}

impl fmt::Debug for EnsembleSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnsembleSampler")
            .field("label", &self.label)
            .field("num_qubits", &self.num_qubits)
            .finish_non_exhaustive()
    }
}

impl EnsembleSampler {
    pub fn new(
        label: impl Into<String>,
        num_qubits: usize,
        generator: impl Fn(RngSeed) -> Result<DensityMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            num_qubits,
            generator: Arc::new(generator),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn sample(&self, seed: RngSeed, index: u64) -> Result<DensityMatrix> {
        let rho = (self.generator)(seed.derive(index))?;
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                got: rho.dim(),
            });
        }
        Ok(rho)
    }

    pub fn haar(n: usize) -> Self {
        Self::new(format!("haar(n={n})"), n, move |s| {
            Ok(sample_haar_state(n, s)?.projector())
        })
    }

    pub fn ghse(params: GhseParams) -> Self {
        Self::new(
            format!("ghse(n={},m={})", params.n(), params.m()),
            params.n(),
            move |s| sample_ghse(params, s),
        )
    }

    /// PRDM with a fresh uniformly random (n+m)-bit key per sample.
    pub fn prdm(n: usize, m: usize, kind: PrfKind) -> Self {
        let spec = match kind {
            PrfKind::KeyedHash => PrfSpec::keyed_hash(n + m),
            PrfKind::Polynomial => PrfSpec::polynomial(n + m, crate::pseudostates::DEFAULT_POLY_DEGREE),
        };
        Self::new(format!("prdm(n={n},m={m})"), n, move |s| {
            let key = Key::random(n + m, &mut s.rng())?;
            make_prdm(&key, spec, n, m)
        })
    }

    /// Always returns `rho`.
    pub fn fixed(label: impl Into<String>, rho: DensityMatrix) -> Self {
        let n = rho.num_qubits();
        Self::new(label, n, move |_| Ok(rho.clone()))
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Ok(Self::fixed(format!("mixed(n={n})"), DensityMatrix::maximally_mixed(n)?))
    }

    /// The same ensemble with `channel` applied to every sample.
    pub fn with_channel(&self, label: impl Into<String>, channel: SharedChannel) -> Result<Self> {
        if channel.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                got: 1 << channel.num_qubits(),
            });
        }
        let inner = self.generator.clone();
        Ok(Self::new(label, self.num_qubits, move |s| channel.apply(&inner(s)?)))
    }
}

/// Outcome of a two-hypothesis experiment. `rate_a` and `rate_b` are the
/// fractions of trials under hypotheses A and B on which the test fired;
/// `advantage` is their difference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistinguishReport {
    pub trials: usize,
    pub rate_a: f64,
    pub rate_b: f64,
    pub advantage: f64,
    pub std_error: f64,
    /// Advantage expected from the sampled states without the measurement
    /// shot noise, where available.
    pub expected_advantage: Option<f64>,
}

impl DistinguishReport {
    pub(crate) fn from_counts(trials: usize, hits_a: u64, hits_b: u64, expected_advantage: Option<f64>) -> Self {
        let t = trials.max(1) as f64;
        let rate_a = hits_a as f64 / t;
        let rate_b = hits_b as f64 / t;
        let var = rate_a * (1.0 - rate_a) / t + rate_b * (1.0 - rate_b) / t;
        Self {
            trials,
            rate_a,
            rate_b,
            advantage: rate_a - rate_b,
            std_error: var.sqrt(),
            expected_advantage,
        }
    }

    /// Success probability of guessing A exactly when the test fires, with
    /// equal priors.
    pub fn success(&self) -> f64 {
        0.5 * (1.0 + self.advantage)
    }

    pub fn success_std_error(&self) -> f64 {
        0.5 * self.std_error
    }
}

const TAG_CLEAN_STATES: u64 = 1;
const TAG_NOISY_STATES: u64 = 2;
const TAG_CLEAN_COINS: u64 = 3;
const TAG_NOISY_COINS: u64 = 4;

/// Runs the two-copy SWAP test once per trial on a fresh sample from each
/// hypothesis and compares acceptance rates.
pub fn purity_attack(
    clean: &EnsembleSampler,
    noisy: &EnsembleSampler,
    trials: usize,
    seed: RngSeed,
) -> Result<DistinguishReport> {
    if trials == 0 {
        return Err(out_of_range("trials", "need at least one trial"));
    }
    let arm = |sampler: &EnsembleSampler, states: u64, coins: u64| -> Result<(Vec<bool>, f64)> {
        let outcomes: Vec<(bool, f64)> = (0..trials as u64)
            .into_par_iter()
            .map(|i| {
                let rho = sampler.sample(seed.derive(states), i)?;
                let p = swap_test_prob(&rho, &rho)?;
                let accept = seed.derive(coins).derive(i).rng().random::<f64>() < p;
                Ok((accept, p))
            })
            .collect::<Result<_>>()?;
        let expected = outcomes.iter().map(|o| o.1).sum::<f64>() / trials as f64;
        Ok((outcomes.into_iter().map(|o| o.0).collect(), expected))
    };
    let (a, pa) = arm(clean, TAG_CLEAN_STATES, TAG_CLEAN_COINS)?;
    let (b, pb) = arm(noisy, TAG_NOISY_STATES, TAG_NOISY_COINS)?;
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count() as u64;
    Ok(DistinguishReport::from_counts(
        trials,
        count(&a),
        count(&b),
        Some(pa - pb),
    ))
}
