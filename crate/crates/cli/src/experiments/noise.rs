//! Purity-attack advantage between clean and noisy PRDM (or GHSE) copies as a
//! function of the mixedness m and the noise strength p.

use std::sync::Arc;

use prdm_core::channels::{depolarizing_global, local_depolarizing_factored, SharedChannel};
use prdm_core::distinguishers::{purity_attack, EnsembleSampler};
use prdm_core::ensembles::{GhseParams, RngSeed};
use prdm_core::pseudostates::PrfKind;
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::config::{ensure, ConfigError, ExperimentConfig, Parameters};
use crate::output::{RowSink, RunOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    LocalDepolarizing,
    GlobalDepolarizing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CleanEnsemble {
    Prdm,
    Ghse,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseParams {
    pub n: usize,
    pub m: Vec<usize>,
    pub p: Vec<f64>,
    pub trials: usize,
    pub ensemble: CleanEnsemble,
    pub noise: NoiseModel,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            n: 4,
            m: vec![0, 2, 4, 6],
            p: vec![0.0, 0.1, 0.2],
            trials: 10_000,
            ensemble: CleanEnsemble::Prdm,
            noise: NoiseModel::LocalDepolarizing,
        }
    }
}

impl Parameters for NoiseParams {
    fn validate(&self) -> Result<(), ConfigError> {
        ensure(self.n >= 1 && self.n <= 8, "n", "must lie in 1..=8")?;
        ensure(
            !self.m.is_empty() && self.m.iter().all(|&m| self.n + m <= 12),
            "m",
            "need n + m ≤ 12",
        )?;
        ensure(
            !self.p.is_empty() && self.p.iter().all(|p| (0.0..=1.0).contains(p)),
            "p",
            "values must lie in [0, 1]",
        )?;
        ensure(self.trials >= 1, "trials", "need at least one trial")
    }
}

pub fn run(cfg: &ExperimentConfig<NoiseParams>) -> Result<RunOutput, RunError> {
    let par = &cfg.parameters;
    let n = par.n;
    let mut sink = RowSink::new(&cfg.experiment, cfg.seed, par);
    let mut ms = par.m.clone();
    ms.sort_unstable();
    ms.dedup();
    // (p index, m) → (advantage, std_error)
    let mut table: Vec<Vec<(f64, f64)>> = vec![Vec::new(); par.p.len()];
    for (pi, &p) in par.p.iter().enumerate() {
        for &m in &ms {
            sink.start_point();
            let clean = match par.ensemble {
                CleanEnsemble::Prdm => EnsembleSampler::prdm(n, m, PrfKind::KeyedHash),
                CleanEnsemble::Ghse => EnsembleSampler::ghse(GhseParams::new(n, m)?),
            };
            let channel: SharedChannel = match par.noise {
                NoiseModel::LocalDepolarizing => Arc::new(local_depolarizing_factored(n, p)?),
                NoiseModel::GlobalDepolarizing => Arc::new(depolarizing_global(n, p)?),
            };
            let noisy = clean.with_channel(format!("{}+noise", clean.label()), channel)?;
            let seed = RngSeed::new(cfg.seed, (pi * 1000 + m) as u64);
            let r = purity_attack(&clean, &noisy, par.trials, seed)?;
            let point = [("n", n.to_string()), ("m", m.to_string()), ("p", p.to_string())];
            sink.push(&point, "advantage", r.advantage, Some(r.std_error));
            sink.push(
                &point,
                "expected_advantage",
                r.expected_advantage.unwrap_or(f64::NAN),
                None,
            );
            sink.push(&point, "clean_accept_rate", r.rate_a, None);
            sink.push(&point, "noisy_accept_rate", r.rate_b, None);
            table[pi].push((r.advantage, r.std_error));
        }
    }
    let mut out = sink.out;
    for (pi, &p) in par.p.iter().enumerate() {
        let row = &table[pi];
        if p == 0.0 {
            let ok = row.iter().all(|(a, s)| a.abs() <= 3.0 * s + 1e-12);
            out.check(
                "p = 0: advantage consistent with zero",
                ok,
                "|advantage| ≤ 3σ for every m",
            );
            continue;
        }
        let mut monotone = true;
        for i in 0..row.len() {
            for j in i + 1..row.len() {
                let slack = 3.0 * (row[i].1.powi(2) + row[j].1.powi(2)).sqrt();
                monotone &= row[i].0 + slack >= row[j].0;
            }
        }
        out.check(format!("p = {p}: advantage non-increasing in m"), monotone, "within 3σ");
        if row.len() >= 2 {
            let (first, last) = (row[0], row[row.len() - 1]);
            out.check(
                format!("p = {p}: m = {} dominates m = {}", ms[0], ms[ms.len() - 1]),
                first.0 > last.0,
                format!("{:.4} vs {:.4}", first.0, last.0),
            );
        }
    }
    Ok(out)
}
