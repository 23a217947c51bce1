//! Learners that measure one copy at a time in an orthonormal basis and keep
//! only a classical transcript.
//!
//! Every built-in learner uses the same decision rule: count pairs of copies
//! whose outcome vectors coincide, then compare the count with a threshold
//! calibrated on independent trials.

use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DistinguishReport, EnsembleSampler};
use crate::ensembles::{haar_unitary_from_rng, RngSeed};
use crate::error::{out_of_range, Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, STRUCT_TOL};

const SAME_RAY: f64 = 1e-9;

/// Outcome vectors seen so far, deduplicated up to phase.
#[derive(Clone, Debug, Default)]
pub struct Transcript {
    vectors: Vec<Vec<Complex64>>,
    counts: Vec<usize>,
    outcomes: Vec<usize>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Distinct-vector ids in measurement order.
    pub fn outcome_ids(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn vector(&self, id: usize) -> &[Complex64] {
        &self.vectors[id]
    }

    /// The most frequently observed vector; ties go to the earliest seen.
    pub fn most_frequent(&self) -> Option<&[Complex64]> {
        let mut best: Option<usize> = None;
        for (id, &c) in self.counts.iter().enumerate() {
            if best.is_none_or(|b| c > self.counts[b]) {
                best = Some(id);
            }
        }
        best.map(|id| self.vectors[id].as_slice())
    }

    /// Number of unordered pairs of copies with the same outcome vector.
    pub fn collisions(&self) -> u64 {
        self.counts.iter().map(|&c| (c * c.saturating_sub(1) / 2) as u64).sum()
    }

    fn record(&mut self, v: Vec<Complex64>) {
        let found = self.vectors.iter().position(|u| {
            let ip: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            ip.norm_sqr() > 1.0 - SAME_RAY
        });
        let id = found.unwrap_or_else(|| {
            self.vectors.push(v);
            self.counts.push(0);
            self.vectors.len() - 1
        });
        self.counts[id] += 1;
        self.outcomes.push(id);
    }
}

/// Chooses the measurement basis for the next copy from the transcript.
pub trait MeasurementPolicy: Send + Sync {
    fn name(&self) -> &str;

    /// A unitary whose columns are the basis vectors, or `None` for the
    /// computational basis.
    fn next_basis(&self, dim: usize, transcript: &Transcript, rng: &mut ChaCha8Rng) -> Option<ComplexMatrix>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    ComputationalBasis,
    FreshHaarBasis,
    /// First copy in a Haar-random basis, then always a basis containing
    /// the most frequent outcome vector so far.
    TranscriptGreedy,
}

impl Policy {
    pub const ALL: [Policy; 3] = [
        Policy::ComputationalBasis,
        Policy::FreshHaarBasis,
        Policy::TranscriptGreedy,
    ];
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "computational-basis" => Ok(Self::ComputationalBasis),
            "fresh-haar-basis" => Ok(Self::FreshHaarBasis),
            "transcript-greedy" => Ok(Self::TranscriptGreedy),
            other => Err(Error::Config(format!("unknown measurement policy `{other}`"))),
        }
    }
}

/// Completes `v` to an orthonormal basis with `v` as the first column.
fn basis_containing(v: &[Complex64]) -> ComplexMatrix {
    let d = v.len();
    let skip = (0..d).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap_or(0);
    let others: Vec<usize> = (0..d).filter(|&j| j != skip).collect();
    let m = ComplexMatrix::from_fn(d, d, |r, c| {
        if c == 0 {
            v[r]
        } else if r == others[c - 1] {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    m.qr_unitary()
}

impl MeasurementPolicy for Policy {
    fn name(&self) -> &str {
        match self {
            Policy::ComputationalBasis => "computational-basis",
            Policy::FreshHaarBasis => "fresh-haar-basis",
            Policy::TranscriptGreedy => "transcript-greedy",
        }
    }

    fn next_basis(&self, dim: usize, transcript: &Transcript, rng: &mut ChaCha8Rng) -> Option<ComplexMatrix> {
        match self {
            Policy::ComputationalBasis => None,
            Policy::FreshHaarBasis => Some(haar_unitary_from_rng(dim, rng)),
            Policy::TranscriptGreedy => match transcript.most_frequent() {
                None => Some(haar_unitary_from_rng(dim, rng)),
                Some(v) => Some(basis_containing(v)),
            },
        }
    }
}

fn measure_copies(
    rho: &DensityMatrix,
    policy: &dyn MeasurementPolicy,
    copies: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Transcript> {
    let d = rho.dim();
    let mut transcript = Transcript::default();
    for _ in 0..copies {
        let basis = policy.next_basis(d, &transcript, rng);
        let probs: Vec<f64> = match &basis {
            None => rho.matrix().diagonal().iter().map(|z| z.re.max(0.0)).collect(),
            Some(u) => {
                if u.rows() != d || !u.is_unitary(STRUCT_TOL.sqrt()) {
                    return Err(Error::InvalidPolicy(format!(
                        "{} returned a non-orthonormal basis",
                        policy.name()
                    )));
                }
                let rotated = rho.matrix().conjugate_by(&u.adjoint())?;
                rotated.diagonal().iter().map(|z| z.re.max(0.0)).collect()
            }
        };
        let total: f64 = probs.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut outcome = d - 1;
        for (j, p) in probs.iter().enumerate() {
            if u < *p {
                outcome = j;
                break;
            }
            u -= p;
        }
        let vector = match &basis {
            None => {
                let mut e = vec![Complex64::new(0.0, 0.0); d];
                e[outcome] = Complex64::new(1.0, 0.0);
                e
            }
            Some(b) => (0..d).map(|r| b[(r, outcome)]).collect(),
        };
        transcript.record(vector);
    }
    Ok(transcript)
}

fn statistics(
    sampler: &EnsembleSampler,
    policy: &dyn MeasurementPolicy,
    copies: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<Vec<u64>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let rho = sampler.sample(seed.derive(0), i)?;
            let mut rng = seed.derive(1).derive(i).rng();
            Ok(measure_copies(&rho, policy, copies, &mut rng)?.collisions())
        })
        .collect()
}

/// Decision rule "guess A iff statistic ≥ threshold" (or ≤ when
/// `upper` is false) maximizing calibration success. Ties keep the
/// earlier candidate, and the all-A rule comes first.
fn calibrate(a: &[u64], b: &[u64]) -> (u64, bool) {
    let mut candidates: Vec<u64> = a.iter().chain(b).copied().collect();
    candidates.sort_unstable();
    candidates.dedup();
    let fires = |x: u64, t: u64, upper: bool| if upper { x >= t } else { x <= t };
    let score = |t: u64, upper: bool| {
        let hits_a = a.iter().filter(|&&x| fires(x, t, upper)).count() as i64;
        let hits_b = b.iter().filter(|&&x| fires(x, t, upper)).count() as i64;
        hits_a * b.len() as i64 - hits_b * a.len() as i64
    };
    let mut best = (0u64, true);
    let mut best_score = score(0, true);
    for &t in &candidates {
        for upper in [true, false] {
            let s = score(t, upper);
            if s > best_score {
                best = (t, upper);
                best_score = s;
            }
        }
    }
    best
}

/// Simulates a memoryless learner on `copies` copies per trial. The decision
/// threshold is calibrated on `trials` extra trials per hypothesis drawn from
/// separate streams. With zero copies the learner always guesses A.
pub fn memoryless_sim(
    hypothesis_a: &EnsembleSampler,
    hypothesis_b: &EnsembleSampler,
    policy: &dyn MeasurementPolicy,
    copies: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<DistinguishReport> {
    if trials == 0 {
        return Err(out_of_range("trials", "need at least one trial"));
    }
    if hypothesis_a.num_qubits() != hypothesis_b.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << hypothesis_a.num_qubits(),
            got: 1 << hypothesis_b.num_qubits(),
        });
    }
    let cal_a = statistics(hypothesis_a, policy, copies, trials, seed.derive(10))?;
    let cal_b = statistics(hypothesis_b, policy, copies, trials, seed.derive(11))?;
    let (threshold, upper) = calibrate(&cal_a, &cal_b);
    let fires = |x: &u64| if upper { *x >= threshold } else { *x <= threshold };
    let run_a = statistics(hypothesis_a, policy, copies, trials, seed.derive(20))?;
    let run_b = statistics(hypothesis_b, policy, copies, trials, seed.derive(21))?;
    let hits_a = run_a.iter().filter(|x| fires(x)).count() as u64;
    let hits_b = run_b.iter().filter(|x| fires(x)).count() as u64;
    Ok(DistinguishReport::from_counts(trials, hits_a, hits_b, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::PureState;

    #[test]
    fn transcript_counts_collisions_up_to_phase() {
        let mut t = Transcript::default();
        let e0 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e0_phase = vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        let e1 = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        t.record(e0.clone());
        t.record(e1);
        t.record(e0_phase);
        t.record(e0);
        assert_eq!(t.collisions(), 3);
        assert_eq!(t.outcome_ids(), &[0, 1, 0, 0]);
        assert_eq!(t.most_frequent().unwrap()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn completed_basis_keeps_first_vector() {
        let psi = crate::ensembles::sample_haar_state(3, RngSeed::new(3, 0)).unwrap();
        let u = basis_containing(psi.amplitudes());
        assert!(u.is_unitary(1e-10));
        let ip: Complex64 = (0..8).map(|r| u[(r, 0)].conj() * psi.amplitudes()[r]).sum();
        assert!((ip.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_copies_is_a_forced_guess() {
        let a = EnsembleSampler::haar(2);
        let b = EnsembleSampler::maximally_mixed(2).unwrap();
        for p in Policy::ALL {
            let r = memoryless_sim(&a, &b, &p, 0, 50, RngSeed::new(1, 0)).unwrap();
            assert_eq!(r.success(), 0.5);
        }
    }

    #[test]
    fn pure_basis_state_is_easy_to_spot() {
        let a = EnsembleSampler::fixed("zero", PureState::basis(1, 0).unwrap().projector());
        let b = EnsembleSampler::maximally_mixed(1).unwrap();
        let r = memoryless_sim(&a, &b, &Policy::ComputationalBasis, 8, 1000, RngSeed::new(2, 0)).unwrap();
        // all-zero outcomes under the mixed state happen with probability 2^-8
        assert!(r.success() > 0.98);
    }

    #[test]
    fn calibration_prefers_all_a_on_ties() {
        assert_eq!(calibrate(&[0, 0], &[0, 0]), (0, true));
        assert_eq!(calibrate(&[5, 6], &[0, 1]), (5, true));
        assert!(!calibrate(&[0, 1], &[5, 6]).1);
    }

    #[test]
    fn policy_names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.name().parse::<Policy>().unwrap(), p);
        }
        assert!("nope".parse::<Policy>().is_err());
    }

    struct Broken;

    impl MeasurementPolicy for Broken {
        fn name(&self) -> &str {
            "broken"
        }

        fn next_basis(&self, dim: usize, _: &Transcript, _: &mut ChaCha8Rng) -> Option<ComplexMatrix> {
            Some(ComplexMatrix::zeros(dim, dim))
        }
    }

    #[test]
    fn invalid_basis_is_rejected() {
        let a = EnsembleSampler::haar(1);
        let r = memoryless_sim(&a, &a, &Broken, 2, 4, RngSeed::new(3, 0));
        assert!(matches!(r, Err(Error::InvalidPolicy(_))));
    }
}
