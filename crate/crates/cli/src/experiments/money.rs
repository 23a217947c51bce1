//! Completeness sweep over the banknote length and the attack matrix.

use prdm_core::ensembles::RngSeed;
use prdm_core::pseudostates::{Key, PrfKind};
use prdm_core::qmoney::{
    clone_attack, completeness_experiment, embezzle_attack, MoneyConfig, NoteFamily, NoteNoise, Scheme,
};
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::config::{ensure, ConfigError, ExperimentConfig, Parameters};
use crate::output::{RowSink, RunOutput};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MoneyParams {
    pub master_key: String,
    pub n_note: usize,
    pub eta: f64,
    pub prf: PrfKind,
    pub note_key_bits: usize,
    pub serial_bits: usize,
    pub completeness_f_min: f64,
    /// Global depolarizing strength applied in transit.
    pub completeness_p: f64,
    pub completeness_notes: Vec<usize>,
    pub completeness_trials: usize,
    pub attack_f_min: f64,
    pub attack_notes: usize,
    pub victims: usize,
    pub attack_trials: usize,
    pub clone_trials: usize,
}

impl Default for MoneyParams {
    fn default() -> Self {
        Self {
            master_key: "0123456789abcdef0123456789abcdef".into(),
            n_note: 8,
            eta: 0.05,
            prf: PrfKind::KeyedHash,
            note_key_bits: 64,
            serial_bits: 32,
            completeness_f_min: 0.6,
            completeness_p: 0.3,
            completeness_notes: vec![25, 50, 100, 200],
            completeness_trials: 1000,
            attack_f_min: 0.75,
            attack_notes: 64,
            victims: 64,
            attack_trials: 1000,
            clone_trials: 1000,
        }
    }
}

impl MoneyParams {
    fn money_config(&self, f_min: f64, notes: usize) -> Result<MoneyConfig, ConfigError> {
        let key = Key::from_hex(&self.master_key, None).map_err(|e| ConfigError::Invalid {
            key: "master_key",
            reason: e.to_string(),
        })?;
        let cfg = MoneyConfig {
            n_note: self.n_note,
            notes,
            eta: self.eta,
            f_min,
            master_key: key,
            prf: self.prf,
            serial_bits: self.serial_bits,
            note_key_bits: self.note_key_bits,
            scheme: Scheme::SingleSerial,
            note_family: NoteFamily::BinaryPhase,
        };
        cfg.validate().map_err(|e| ConfigError::Invalid {
            key: "money configuration",
            reason: e.to_string(),
        })?;
        Ok(cfg)
    }
}

impl Parameters for MoneyParams {
    fn validate(&self) -> Result<(), ConfigError> {
        ensure(
            (0.0..=1.0).contains(&self.completeness_p),
            "completeness_p",
            "must lie in [0, 1]",
        )?;
        ensure(
            !self.completeness_notes.is_empty(),
            "completeness_notes",
            "need at least one length",
        )?;
        for &l in &self.completeness_notes {
            self.money_config(self.completeness_f_min, l)?;
        }
        self.money_config(self.attack_f_min, self.attack_notes)?;
        ensure(
            self.victims >= self.attack_notes,
            "victims",
            "need at least one victim per note slot",
        )?;
        ensure(
            self.completeness_trials >= 1,
            "completeness_trials",
            "need at least one trial",
        )?;
        ensure(self.attack_trials >= 1, "attack_trials", "need at least one trial")?;
        ensure(self.clone_trials >= 1, "clone_trials", "need at least one trial")
    }
}

pub fn run(cfg: &ExperimentConfig<MoneyParams>) -> Result<RunOutput, RunError> {
    let par = &cfg.parameters;
    let mut sink = RowSink::new(&cfg.experiment, cfg.seed, par);
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    let mut violated = false;

    let mut lengths = par.completeness_notes.clone();
    lengths.sort_unstable();
    lengths.dedup();
    let mut prev: Option<(f64, f64)> = None;
    let mut chernoff_ok = true;
    let mut monotone = true;
    for &l in &lengths {
        sink.start_point();
        let mc = par.money_config(par.completeness_f_min, l)?;
        let noise = NoteNoise::GlobalDepolarizing(par.completeness_p);
        let r = completeness_experiment(&mc, &noise, par.completeness_trials, RngSeed::new(cfg.seed, l as u64))?;
        let point = [("scenario", "completeness".to_string()), ("notes", l.to_string())];
        sink.push(&point, "empirical_error", r.empirical_error, Some(r.std_error));
        sink.push(&point, "chernoff_bound", r.chernoff_bound, None);
        sink.push(&point, "threshold", r.threshold as f64, None);
        sink.push(&point, "min_note_fidelity", r.min_note_fidelity, None);
        sink.push(
            &point,
            "assumption_violated",
            f64::from(u8::from(r.assumption_violated)),
            None,
        );
        violated |= r.assumption_violated;
        chernoff_ok &= r.empirical_error <= r.chernoff_bound + 3.0 * r.std_error;
        if let Some((e, s)) = prev {
            monotone &= r.empirical_error <= e + 3.0 * (s * s + r.std_error * r.std_error).sqrt();
        }
        prev = Some((r.empirical_error, r.std_error));
    }
    checks.push((
        "completeness error ≤ Chernoff bound + 3σ".into(),
        chernoff_ok,
        format!("L ∈ {lengths:?}"),
    ));
    checks.push((
        "completeness error non-increasing in L".into(),
        monotone,
        "within 3σ".into(),
    ));

    let attack_cfg = par.money_config(par.attack_f_min, par.attack_notes)?;
    let mut rates = Vec::new();
    for (tag, scheme) in [(1u64, Scheme::PerNoteSerial), (2, Scheme::SingleSerial)] {
        sink.start_point();
        let mc = MoneyConfig {
            scheme,
            ..attack_cfg.clone()
        };
        let r = embezzle_attack(
            &mc,
            par.victims,
            par.attack_trials,
            RngSeed::new(cfg.seed, 10_000 + tag),
        )?;
        let name = match scheme {
            Scheme::PerNoteSerial => "per-note-serial",
            Scheme::SingleSerial => "single-serial",
        };
        let point = [
            ("scenario", format!("embezzle/{name}")),
            ("notes", mc.notes.to_string()),
        ];
        let se = (r.counterfeit_accept_rate * (1.0 - r.counterfeit_accept_rate) / r.trials as f64).sqrt();
        sink.push(&point, "counterfeit_accept_rate", r.counterfeit_accept_rate, Some(se));
        sink.push(&point, "counterfeit_exact", r.counterfeit_exact, None);
        sink.push(&point, "victims_still_valid_rate", r.victims_still_valid_rate, None);
        sink.push(&point, "threshold", r.threshold as f64, None);
        rates.push(r.counterfeit_accept_rate);
        match scheme {
            Scheme::PerNoteSerial => checks.push((
                "per-note-serial counterfeit accepted ≥ 0.99".into(),
                r.counterfeit_accept_rate >= 0.99,
                format!("{}", r.counterfeit_accept_rate),
            )),
            Scheme::SingleSerial => {
                checks.push((
                    "single-serial counterfeit accepted ≤ 1e-3".into(),
                    r.counterfeit_accept_rate <= 1e-3,
                    format!("{}", r.counterfeit_accept_rate),
                ));
                checks.push((
                    "single-serial victims remain valid".into(),
                    r.threshold < mc.notes && r.victims_still_valid_rate >= 0.99,
                    format!("{}", r.victims_still_valid_rate),
                ));
            }
        }
    }
    checks.push((
        "single-serial counterfeit ≤ per-note-serial counterfeit".into(),
        rates[1] <= rates[0],
        format!("{} vs {}", rates[1], rates[0]),
    ));

    for (tag, family) in [(20u64, NoteFamily::BinaryPhase), (21, NoteFamily::BasisZero)] {
        sink.start_point();
        let mc = MoneyConfig {
            note_family: family,
            ..attack_cfg.clone()
        };
        let r = clone_attack(&mc, par.clone_trials, RngSeed::new(cfg.seed, 10_000 + tag))?;
        let name = match family {
            NoteFamily::BinaryPhase => "binary-phase",
            NoteFamily::BasisZero => "basis-zero",
        };
        let point = [("scenario", format!("clone/{name}")), ("notes", mc.notes.to_string())];
        sink.push(&point, "acceptance_rate", r.acceptance_rate, None);
        sink.push(&point, "exact_acceptance", r.exact_acceptance, None);
        sink.push(&point, "mean_note_fidelity", r.mean_note_fidelity, None);
        match family {
            NoteFamily::BinaryPhase => checks.push((
                "measure-and-prepare clone acceptance ≤ 1e-6".into(),
                r.exact_acceptance <= 1e-6 && r.acceptance_rate == 0.0,
                format!("exact {:e}", r.exact_acceptance),
            )),
            NoteFamily::BasisZero => checks.push((
                "basis-zero control clones are accepted".into(),
                r.acceptance_rate == 1.0,
                format!("{}", r.acceptance_rate),
            )),
        }
    }

    let mut out = sink.out;
    out.assumption_violated = violated;
    for (name, ok, detail) in checks {
        out.check(name, ok, detail);
    }
    Ok(out)
}
