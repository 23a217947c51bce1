//! Private-key quantum money built from binary-phase pseudorandom notes,
//! with threshold verification that tolerates noise, and the counterfeiting
//! attacks used to probe it.
//!
//! A banknote carries L notes. Note i under serial s is the binary-phase
//! state keyed by `derive_key(master, "note", s ∥ i)`, with s as 8 big-endian
//! bytes and i as 4 big-endian bytes. In the single-serial scheme every note
//! shares the banknote serial; the per-note-serial scheme gives each note its
//! own serial and is vulnerable to embezzling.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::SharedChannel;
use crate::ensembles::RngSeed;
use crate::error::{out_of_range, Error, Result};
use crate::pseudostates::{binary_phase_state, derive_key, Key, PrfKind, PrfSpec, DEFAULT_POLY_DEGREE};
use crate::qcore::{check_qubits, DensityMatrix, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    SingleSerial,
    /// Deliberately weak variant kept to demonstrate the embezzling break.
    PerNoteSerial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoteFamily {
    BinaryPhase,
    /// Every note is |0…0⟩. A control with no pseudorandomness.
    BasisZero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoneyConfig {
    pub n_note: usize,
    pub notes: usize,
    pub eta: f64,
    pub f_min: f64,
    pub master_key: Key,
    pub prf: PrfKind,
    pub serial_bits: usize,
    pub note_key_bits: usize,
    pub scheme: Scheme,
    pub note_family: NoteFamily,
}

impl MoneyConfig {
    /// n_note = 8, L = 64, F_min = 0.75, η = 0.05, single serial.
    pub fn defaults(master_key: Key) -> Self {
        Self {
            n_note: 8,
            notes: 64,
            eta: 0.05,
            f_min: 0.75,
            master_key,
            prf: PrfKind::KeyedHash,
            serial_bits: 32,
            note_key_bits: 64,
            scheme: Scheme::SingleSerial,
            note_family: NoteFamily::BinaryPhase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.notes == 0 {
            return Err(out_of_range("notes per banknote", "need at least one note"));
        }
        if self.n_note == 0 {
            return Err(out_of_range("note qubits", "need at least one qubit"));
        }
        check_qubits(self.n_note)?;
        if !(self.f_min > 0.5 && self.f_min < 1.0) {
            return Err(out_of_range(
                "minimum fidelity",
                format!("{} not in (1/2, 1)", self.f_min),
            ));
        }
        if !(self.eta > 0.0 && self.eta < 1.0 - self.f_min) {
            return Err(out_of_range(
                "threshold slack",
                format!("{} not in (0, 1 - F_min)", self.eta),
            ));
        }
        if self.serial_bits == 0 || self.serial_bits > 64 {
            return Err(out_of_range(
                "serial bits",
                format!("{} not in 1..=64", self.serial_bits),
            ));
        }
        if self.note_key_bits == 0 {
            return Err(out_of_range("note key bits", "need at least one bit"));
        }
        Ok(())
    }

    /// Smallest integer T with T ≥ (F_min + η)·L.
    pub fn threshold(&self) -> usize {
        ((self.f_min + self.eta) * self.notes as f64 - 1e-9).ceil().max(0.0) as usize
    }

    fn spec(&self) -> PrfSpec {
        match self.prf {
            PrfKind::KeyedHash => PrfSpec::keyed_hash(self.n_note),
            PrfKind::Polynomial => PrfSpec::polynomial(self.n_note, DEFAULT_POLY_DEGREE),
        }
    }

    fn check_serial(&self, serial: u64) -> Result<()> {
        if self.serial_bits < 64 && serial >> self.serial_bits != 0 {
            return Err(out_of_range(
                "serial",
                format!("{serial} exceeds {} bits", self.serial_bits),
            ));
        }
        Ok(())
    }

    /// The state the bank expects in slot `index` of a note with `serial`.
    pub fn note_target(&self, serial: u64, index: usize) -> Result<PureState> {
        match self.note_family {
            NoteFamily::BasisZero => PureState::basis(self.n_note, 0),
            NoteFamily::BinaryPhase => {
                let mut input = serial.to_be_bytes().to_vec();
                input.extend_from_slice(&(index as u32).to_be_bytes());
                let key = derive_key(&self.master_key, b"note", &input, self.note_key_bits)?;
                binary_phase_state(&key, self.spec(), self.n_note)
            }
        }
    }

    fn note_serial(&self, serial: u64, index: usize) -> u64 {
        match self.scheme {
            Scheme::SingleSerial => serial,
            Scheme::PerNoteSerial => {
                let mut z = serial ^ ((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                z = (z ^ (z >> 31)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
                z ^= z >> 29;
                if self.serial_bits < 64 {
                    z & ((1u64 << self.serial_bits) - 1)
                } else {
                    z
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NoteComponent {
    Pure(Arc<PureState>),
    MaximallyMixed,
    Dense(DensityMatrix),
}

/// A note held as a convex mixture of components, which keeps depolarized
/// pure notes cheap.
#[derive(Clone, Debug, PartialEq)]
pub struct NoteState {
    num_qubits: usize,
    parts: Vec<(f64, NoteComponent)>,
}

impl NoteState {
    pub fn pure(psi: PureState) -> Self {
        Self {
            num_qubits: psi.num_qubits(),
            parts: vec![(1.0, NoteComponent::Pure(Arc::new(psi)))],
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            parts: vec![(1.0, NoteComponent::MaximallyMixed)],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn parts(&self) -> &[(f64, NoteComponent)] {
        &self.parts
    }

    /// ⟨ψ|note|ψ⟩.
    pub fn fidelity_with(&self, psi: &PureState) -> Result<f64> {
        if psi.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                got: psi.dim(),
            });
        }
        let d = psi.dim() as f64;
        let mut f = 0.0;
        for (w, part) in &self.parts {
            f += w * match part {
                NoteComponent::Pure(phi) => psi.inner(phi)?.norm_sqr(),
                NoteComponent::MaximallyMixed => 1.0 / d,
                NoteComponent::Dense(rho) => psi.expectation(rho)?,
            };
        }
        Ok(f.clamp(0.0, 1.0))
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let mixed = DensityMatrix::maximally_mixed(self.num_qubits)?;
        let dense: Vec<(f64, DensityMatrix)> = self
            .parts
            .iter()
            .map(|(w, part)| {
                let rho = match part {
                    NoteComponent::Pure(phi) => phi.projector(),
                    NoteComponent::MaximallyMixed => mixed.clone(),
                    NoteComponent::Dense(rho) => rho.clone(),
                };
                (*w, rho)
            })
            .collect();
        DensityMatrix::mixture(dense.iter().map(|(w, r)| (*w, r)))
    }

    fn depolarize(&self, p: f64) -> Self {
        let mut parts: Vec<(f64, NoteComponent)> = self.parts.iter().map(|(w, c)| (w * (1.0 - p), c.clone())).collect();
        parts.retain(|(w, _)| *w > 0.0);
        if p > 0.0 {
            parts.push((p, NoteComponent::MaximallyMixed));
        }
        Self {
            num_qubits: self.num_qubits,
            parts,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Banknote {
    pub serial: u64,
    pub scheme: Scheme,
    /// Serial attached to each note; all equal `serial` in the single-serial
    /// scheme.
    pub note_serials: Vec<u64>,
    pub notes: Vec<NoteState>,
}

/// Issues the banknote with `serial`. Deterministic in (master key, serial).
pub fn mint(cfg: &MoneyConfig, serial: u64) -> Result<Banknote> {
    cfg.validate()?;
    cfg.check_serial(serial)?;
    let note_serials: Vec<u64> = (0..cfg.notes).map(|i| cfg.note_serial(serial, i)).collect();
    let notes = note_serials
        .iter()
        .enumerate()
        .map(|(i, &s)| Ok(NoteState::pure(cfg.note_target(s, i)?)))
        .collect::<Result<_>>()?;
    Ok(Banknote {
        serial,
        scheme: cfg.scheme,
        note_serials,
        notes,
    })
}

#[derive(Clone)]
pub enum NoteNoise {
    Identity,
    /// ρ ↦ (1−p)ρ + p·I/d on every note.
    GlobalDepolarizing(f64),
    Channel(SharedChannel),
}

impl std::fmt::Debug for NoteNoise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoteNoise::Identity => write!(f, "Identity"),
            NoteNoise::GlobalDepolarizing(p) => write!(f, "GlobalDepolarizing({p})"),
            NoteNoise::Channel(ch) => write!(f, "Channel({} qubits)", ch.num_qubits()),
        }
    }
}

/// Applies `noise` to every note independently.
pub fn transport(banknote: Banknote, noise: &NoteNoise) -> Result<Banknote> {
    let notes = match noise {
        NoteNoise::Identity => banknote.notes,
        NoteNoise::GlobalDepolarizing(p) => {
            if !(0.0..=1.0).contains(p) {
                return Err(out_of_range("probability", format!("{p} not in [0, 1]")));
            }
            banknote.notes.iter().map(|n| n.depolarize(*p)).collect()
        }
        NoteNoise::Channel(ch) => banknote
            .notes
            .iter()
            .map(|n| {
                if ch.num_qubits() != n.num_qubits() {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << n.num_qubits(),
                        got: 1 << ch.num_qubits(),
                    });
                }
                Ok(NoteState {
                    num_qubits: n.num_qubits(),
                    parts: vec![(1.0, NoteComponent::Dense(ch.apply(&n.to_density_matrix()?)?))],
                })
            })
            .collect::<Result<_>>()?,
    };
    Ok(Banknote { notes, ..banknote })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub successes: usize,
    pub accepted: bool,
}

/// Per-note projection probabilities onto the bank's expected states.
pub fn note_fidelities(cfg: &MoneyConfig, banknote: &Banknote) -> Result<Vec<f64>> {
    if banknote.scheme != cfg.scheme {
        return Err(Error::SchemeMismatch);
    }
    if banknote.notes.len() != cfg.notes || banknote.note_serials.len() != cfg.notes {
        return Err(Error::DimensionMismatch {
            expected: cfg.notes,
            got: banknote.notes.len(),
        });
    }
    if cfg.scheme == Scheme::SingleSerial && banknote.note_serials.iter().any(|&s| s != banknote.serial) {
        return Err(Error::SchemeMismatch);
    }
    banknote
        .notes
        .iter()
        .zip(&banknote.note_serials)
        .enumerate()
        .map(|(i, (note, &s))| note.fidelity_with(&cfg.note_target(s, i)?))
        .collect()
}

/// Projects every note onto its expected state (one Bernoulli draw each) and
/// accepts when at least `threshold()` projections succeed. Consumes the
/// banknote.
pub fn verify(cfg: &MoneyConfig, banknote: Banknote, seed: RngSeed) -> Result<Verification> {
    cfg.validate()?;
    let fids = note_fidelities(cfg, &banknote)?;
    Ok(verify_with_fidelities(cfg, &fids, seed))
}

fn verify_with_fidelities(cfg: &MoneyConfig, fids: &[f64], seed: RngSeed) -> Verification {
    let mut rng = seed.rng();
    let successes = fids.iter().filter(|&&f| rng.random::<f64>() < f).count();
    Verification {
        successes,
        accepted: successes >= cfg.threshold(),
    }
}

/// P(at least `threshold` successes) for independent trials with the given
/// probabilities.
pub fn acceptance_probability(fidelities: &[f64], threshold: usize) -> f64 {
    if threshold == 0 {
        return 1.0;
    }
    let mut dist = vec![0.0; fidelities.len() + 1];
    dist[0] = 1.0;
    for (k, &p) in fidelities.iter().enumerate() {
        for j in (0..=k + 1).rev() {
            let stay = if j <= k { dist[j] * (1.0 - p) } else { 0.0 };
            let step = if j > 0 { dist[j - 1] * p } else { 0.0 };
            dist[j] = stay + step;
        }
    }
    dist.iter().skip(threshold).sum::<f64>().min(1.0)
}

fn trial_serial(cfg: &MoneyConfig, seed: RngSeed, trial: u64, slot: u64) -> u64 {
    let z = seed.derive(trial).derive(slot).rng().random::<u64>();
    if cfg.serial_bits < 64 {
        z & ((1u64 << cfg.serial_bits) - 1)
    } else {
        z
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub notes: usize,
    pub threshold: usize,
    pub trials: usize,
    pub min_note_fidelity: f64,
    pub empirical_error: f64,
    pub std_error: f64,
    pub chernoff_bound: f64,
    /// Some note's fidelity is below F_min + η, so the bound does not apply.
    pub assumption_violated: bool,
}

/// Rejection rate of freshly minted banknotes sent through `noise`, next to
/// exp(−Lη²/(3F_min)).
pub fn completeness_experiment(
    cfg: &MoneyConfig,
    noise: &NoteNoise,
    trials: usize,
    seed: RngSeed,
) -> Result<CompletenessReport> {
    cfg.validate()?;
    if trials == 0 {
        return Err(out_of_range("trials", "need at least one trial"));
    }
    let outcomes: Vec<(bool, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let note = transport(mint(cfg, trial_serial(cfg, seed, t, 0))?, noise)?;
            let fids = note_fidelities(cfg, &note)?;
            let min = fids.iter().copied().fold(1.0, f64::min);
            Ok((
                verify_with_fidelities(cfg, &fids, seed.derive(t).derive(1)).accepted,
                min,
            ))
        })
        .collect::<Result<_>>()?;
    let rejected = outcomes.iter().filter(|o| !o.0).count() as f64;
    let min_note_fidelity = outcomes.iter().map(|o| o.1).fold(1.0, f64::min);
    let rate = rejected / trials as f64;
    Ok(CompletenessReport {
        notes: cfg.notes,
        threshold: cfg.threshold(),
        trials,
        min_note_fidelity,
        empirical_error: rate,
        std_error: (rate * (1.0 - rate) / trials as f64).sqrt(),
        chernoff_bound: (-(cfg.notes as f64) * cfg.eta * cfg.eta / (3.0 * cfg.f_min)).exp(),
        assumption_violated: min_note_fidelity < cfg.f_min + cfg.eta,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbezzleReport {
    pub scheme: Scheme,
    pub victims: usize,
    pub trials: usize,
    pub threshold: usize,
    pub counterfeit_accept_rate: f64,
    /// Exact acceptance probability of the counterfeit, averaged over trials.
    pub counterfeit_exact: f64,
    pub victims_still_valid_rate: f64,
}

/// Steals one note from each of `victims` banknotes (slot v mod L from
/// victim v), leaving I/2^n in its place, and pools the first L stolen notes
/// into a counterfeit. Under the per-note-serial scheme the stolen serials
/// travel with their notes; under the single-serial scheme the counterfeit
/// needs a fresh banknote serial.
pub fn embezzle_attack(cfg: &MoneyConfig, victims: usize, trials: usize, seed: RngSeed) -> Result<EmbezzleReport> {
    cfg.validate()?;
    if victims < cfg.notes {
        return Err(out_of_range(
            "victims",
            format!("{victims} < {} notes per banknote", cfg.notes),
        ));
    }
    if trials == 0 {
        return Err(out_of_range("trials", "need at least one trial"));
    }
    let l = cfg.notes;
    let results: Vec<(bool, f64, usize)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut stolen: Vec<Option<(u64, NoteState)>> = vec![None; l];
            let mut valid = 0usize;
            for v in 0..victims {
                let mut note = mint(cfg, trial_serial(cfg, seed, t, 1 + v as u64))?;
                let slot = v % l;
                let taken = std::mem::replace(&mut note.notes[slot], NoteState::maximally_mixed(cfg.n_note));
                if stolen[slot].is_none() {
                    stolen[slot] = Some((note.note_serials[slot], taken));
                }
                if verify(cfg, note, seed.derive(t).derive(100 + v as u64))?.accepted {
                    valid += 1;
                }
            }
            let (serials, notes): (Vec<u64>, Vec<NoteState>) = stolen
                .into_iter()
                .map(|s| s.expect("victims ≥ L fills every slot"))
                .unzip();
            let counterfeit = match cfg.scheme {
                Scheme::PerNoteSerial => Banknote {
                    serial: serials[0],
                    scheme: cfg.scheme,
                    note_serials: serials,
                    notes,
                },
                Scheme::SingleSerial => {
                    let fresh = trial_serial(cfg, seed, t, 0);
                    Banknote {
                        serial: fresh,
                        scheme: cfg.scheme,
                        note_serials: vec![fresh; l],
                        notes,
                    }
                }
            };
            let fids = note_fidelities(cfg, &counterfeit)?;
            let exact = acceptance_probability(&fids, cfg.threshold());
            let accepted = verify_with_fidelities(cfg, &fids, seed.derive(t).derive(99)).accepted;
            Ok((accepted, exact, valid))
        })
        .collect::<Result<_>>()?;
    let n = trials as f64;
    Ok(EmbezzleReport {
        scheme: cfg.scheme,
        victims,
        trials,
        threshold: cfg.threshold(),
        counterfeit_accept_rate: results.iter().filter(|r| r.0).count() as f64 / n,
        counterfeit_exact: results.iter().map(|r| r.1).sum::<f64>() / n,
        victims_still_valid_rate: results.iter().map(|r| r.2).sum::<usize>() as f64 / (n * victims as f64),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloneReport {
    pub trials: usize,
    pub acceptance_rate: f64,
    /// Exact acceptance probability of the rebuilt banknote, averaged over
    /// trials.
    pub exact_acceptance: f64,
    pub mean_note_fidelity: f64,
}

/// Measures every note of a fresh banknote in the computational basis and
/// rebuilds the banknote from the outcomes.
pub fn clone_attack(cfg: &MoneyConfig, trials: usize, seed: RngSeed) -> Result<CloneReport> {
    cfg.validate()?;
    if trials == 0 {
        return Err(out_of_range("trials", "need at least one trial"));
    }
    let results: Vec<(bool, f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let original = mint(cfg, trial_serial(cfg, seed, t, 0))?;
            let mut rng = seed.derive(t).derive(2).rng();
            let rebuilt_notes = original
                .notes
                .iter()
                .map(|note| {
                    let NoteComponent::Pure(psi) = &note.parts()[0].1 else {
                        unreachable!("freshly minted notes are pure")
                    };
                    let mut u = rng.random::<f64>();
                    let mut outcome = psi.dim() - 1;
                    for (x, a) in psi.amplitudes().iter().enumerate() {
                        let p = a.norm_sqr();
                        if u < p {
                            outcome = x;
                            break;
                        }
                        u -= p;
                    }
                    Ok(NoteState::pure(PureState::basis(cfg.n_note, outcome)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let rebuilt = Banknote {
                notes: rebuilt_notes,
                ..original
            };
            let fids = note_fidelities(cfg, &rebuilt)?;
            let mean = fids.iter().sum::<f64>() / fids.len() as f64;
            let exact = acceptance_probability(&fids, cfg.threshold());
            let accepted = verify_with_fidelities(cfg, &fids, seed.derive(t).derive(3)).accepted;
            Ok((accepted, exact, mean))
        })
        .collect::<Result<_>>()?;
    let n = trials as f64;
    Ok(CloneReport {
        trials,
        acceptance_rate: results.iter().filter(|r| r.0).count() as f64 / n,
        exact_acceptance: results.iter().map(|r| r.1).sum::<f64>() / n,
        mean_note_fidelity: results.iter().map(|r| r.2).sum::<f64>() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MoneyConfig {
        MoneyConfig::defaults(Key::from_hex("0123456789abcdef", None).unwrap())
    }

    #[test]
    fn threshold_is_a_ceiling() {
        let mut c = cfg();
        assert_eq!(c.threshold(), 52);
        c.f_min = 0.6;
        c.eta = 0.05;
        for (l, t) in [(25, 17), (50, 33), (100, 65), (200, 130), (20, 13)] {
            c.notes = l;
            assert_eq!(c.threshold(), t, "L={l}");
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.f_min = 0.5;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.eta = 0.25;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.notes = 0;
        assert!(c.validate().is_err());
        assert!(mint(&cfg(), 1u64 << 40).is_err());
    }

    #[test]
    fn minting_is_deterministic_and_exact() {
        let c = cfg();
        let a = mint(&c, 17).unwrap();
        let b = mint(&c, 17).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.notes.len(), 64);
        let v = verify(&c, a, RngSeed::new(1, 0)).unwrap();
        assert_eq!(
            v,
            Verification {
                successes: 64,
                accepted: true
            }
        );
    }

    #[test]
    fn scheme_mismatch_is_an_error() {
        let c = cfg();
        let note = mint(&c, 3).unwrap();
        let mut other = c.clone();
        other.scheme = Scheme::PerNoteSerial;
        assert_eq!(verify(&other, note, RngSeed::new(0, 0)), Err(Error::SchemeMismatch));
    }

    #[test]
    fn depolarized_note_fidelity() {
        let c = cfg();
        let note = transport(mint(&c, 5).unwrap(), &NoteNoise::GlobalDepolarizing(0.3)).unwrap();
        let f = note_fidelities(&c, &note).unwrap();
        assert!(f.iter().all(|x| (x - (0.7 + 0.3 / 256.0)).abs() < 1e-12));
        let gone = transport(mint(&c, 5).unwrap(), &NoteNoise::GlobalDepolarizing(1.0)).unwrap();
        let mixed = DensityMatrix::maximally_mixed(8).unwrap();
        assert!(gone
            .notes
            .iter()
            .all(|n| n.to_density_matrix().unwrap().matrix().approx_eq(mixed.matrix(), 1e-15)));
    }

    #[test]
    fn poisson_binomial_tail() {
        assert!((acceptance_probability(&[0.5, 0.5], 1) - 0.75).abs() < 1e-15);
        assert!((acceptance_probability(&[0.5, 0.5], 2) - 0.25).abs() < 1e-15);
        assert_eq!(acceptance_probability(&[0.3; 5], 0), 1.0);
        assert_eq!(acceptance_probability(&[0.3; 5], 6), 0.0);
        let tail = acceptance_probability(&[0.1, 0.2, 0.7], 2);
        let direct = 0.1 * 0.2 * 0.3 + 0.1 * 0.8 * 0.7 + 0.9 * 0.2 * 0.7 + 0.1 * 0.2 * 0.7;
        assert!((tail - direct).abs() < 1e-15);
    }

    #[test]
    fn basis_zero_notes_survive_cloning() {
        let mut c = cfg();
        c.note_family = NoteFamily::BasisZero;
        let r = clone_attack(&c, 20, RngSeed::new(4, 0)).unwrap();
        assert_eq!(r.acceptance_rate, 1.0);
        assert!((r.exact_acceptance - 1.0).abs() < 1e-12);
    }
}
