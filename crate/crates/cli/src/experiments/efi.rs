//! Statistical gap of keyed-average PRDMs and the depolarizing noise budget.

use prdm_core::channels::local_depolarizing_entropy;
use prdm_core::distinguishers::{
    critical_local_depolarizing_p, efi_gap, efi_noise_budget_from_entropy, prdm_key_average,
};
use prdm_core::ensembles::RngSeed;
use prdm_core::pseudostates::PrfKind;
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::config::{ensure, ConfigError, ExperimentConfig, Parameters};
use crate::output::{RowSink, RunOutput};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct EfiParams {
    /// (n, m, κ) triples.
    pub points: Vec<[usize; 3]>,
    pub prf: PrfKind,
    /// Keys drawn when κ is too large to enumerate.
    pub samples: usize,
    pub budget_n: usize,
    pub budget_m: usize,
    pub c: f64,
    pub p: Vec<f64>,
}

impl Default for EfiParams {
    fn default() -> Self {
        Self {
            points: vec![[5, 1, 6], [4, 1, 8], [3, 0, 12], [6, 2, 10], [4, 0, 4], [2, 1, 3]],
            prf: PrfKind::KeyedHash,
            samples: 256,
            budget_n: 100,
            budget_m: 10,
            c: 1e-4,
            p: vec![0.2, 0.25],
        }
    }
}

impl Parameters for EfiParams {
    fn validate(&self) -> Result<(), ConfigError> {
        ensure(
            self.points
                .iter()
                .all(|&[n, m, k]| n >= 1 && n + m <= 12 && (1..=64).contains(&k)),
            "points",
            "need n ≥ 1, n + m ≤ 12 and 1 ≤ κ ≤ 64",
        )?;
        ensure(self.samples >= 2, "samples", "need at least two keys")?;
        ensure(self.c > 0.0 && self.c < 1.0, "c", "must lie in (0, 1)")?;
        ensure(
            self.p.iter().all(|p| (0.0..=1.0).contains(p)),
            "p",
            "values must lie in [0, 1]",
        )
    }
}

pub fn run(cfg: &ExperimentConfig<EfiParams>) -> Result<RunOutput, RunError> {
    let par = &cfg.parameters;
    let mut sink = RowSink::new(&cfg.experiment, cfg.seed, par);
    let mut theorem_holds = true;
    let mut budget_holds = true;
    for (idx, &[n, m, kappa]) in par.points.iter().enumerate() {
        sink.start_point();
        let avg = prdm_key_average(par.prf, n, m, kappa, par.samples, RngSeed::new(cfg.seed, idx as u64))?;
        let g = efi_gap(&avg.state)?;
        let point = [
            ("mode", "gap".to_string()),
            ("n", n.to_string()),
            ("m", m.to_string()),
            ("kappa", kappa.to_string()),
        ];
        sink.push(&point, "s0", g.s0, None);
        sink.push(&point, "fannes_lower_bound", g.fannes_lower_bound, None);
        sink.push(&point, "exact_td", g.exact_td, None);
        sink.push(&point, "vacuous", f64::from(u8::from(g.is_vacuous())), None);
        sink.push(&point, "keys", avg.keys as f64, Some(avg.entry_std_error));
        theorem_holds &= g.exact_td >= g.fannes_lower_bound - 1e-8;
        budget_holds &= !avg.exhaustive || g.s0 <= (kappa + m) as f64 + 1e-9;
    }
    for &p in &par.p {
        sink.start_point();
        let h = local_depolarizing_entropy(par.budget_n, p);
        let b = efi_noise_budget_from_entropy(par.budget_n, par.budget_m, par.c, h)?;
        let point = [
            ("mode", "budget".to_string()),
            ("n", par.budget_n.to_string()),
            ("m", par.budget_m.to_string()),
            ("c", par.c.to_string()),
            ("p", p.to_string()),
        ];
        sink.push(&point, "h", b.h, None);
        sink.push(&point, "budget", b.budget, None);
        sink.push(&point, "robust", f64::from(u8::from(b.robust)), None);
    }
    sink.start_point();
    let critical = critical_local_depolarizing_p(par.budget_n, par.budget_m, par.c)?;
    let point = [
        ("mode", "critical".to_string()),
        ("n", par.budget_n.to_string()),
        ("m", par.budget_m.to_string()),
        ("c", par.c.to_string()),
    ];
    sink.push(&point, "critical_p", critical, None);
    let mut out = sink.out;
    if !par.points.is_empty() {
        out.check("exact_td ≥ Fannes lower bound", theorem_holds, "every key average");
        out.check("S(ν₀) ≤ κ + m", budget_holds, "every exhaustive key average");
    }
    out.check(
        "critical depolarizing p in [0.20, 0.25]",
        (0.20..=0.25).contains(&critical),
        format!("{critical:.6}"),
    );
    Ok(out)
}
