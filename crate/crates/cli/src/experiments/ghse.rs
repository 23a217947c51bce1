//! Exact t-copy distance between GHSE and maximally mixed moments.

use prdm_core::ensembles::{moment_td_envelope, td_ghse_to_mixed, GhseParams};
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::config::{ensure, ConfigError, ExperimentConfig, Parameters};
use crate::output::{RowSink, RunOutput};

/// Largest n·t handled by the dense t-copy moment.
pub const MAX_MOMENT_QUBITS: usize = 10;
pub const MAX_COPIES: usize = 6;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct GhseMomentsParams {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub t: Vec<usize>,
}

impl Default for GhseMomentsParams {
    fn default() -> Self {
        Self {
            n: vec![1, 2, 3],
            m: (0..=5).collect(),
            t: vec![1, 2],
        }
    }
}

impl Parameters for GhseMomentsParams {
    fn validate(&self) -> Result<(), ConfigError> {
        ensure(
            !self.n.is_empty() && self.n.iter().all(|&n| n >= 1),
            "n",
            "need at least one value, all ≥ 1",
        )?;
        ensure(!self.m.is_empty(), "m", "need at least one value")?;
        ensure(
            !self.t.is_empty() && self.t.iter().all(|&t| (1..=MAX_COPIES).contains(&t)),
            "t",
            format!("values must lie in 1..={MAX_COPIES}"),
        )?;
        let widest = self.n.iter().max().unwrap() * self.t.iter().max().unwrap();
        ensure(
            widest <= MAX_MOMENT_QUBITS,
            "n",
            format!("n·t = {widest} exceeds the dense moment limit of {MAX_MOMENT_QUBITS}"),
        )?;
        ensure(self.m.iter().all(|&m| m <= 40), "m", "values must be at most 40")
    }
}

pub fn run(cfg: &ExperimentConfig<GhseMomentsParams>) -> Result<RunOutput, RunError> {
    let p = &cfg.parameters;
    let mut sink = RowSink::new(&cfg.experiment, cfg.seed, p);
    let mut ms = p.m.clone();
    ms.sort_unstable();
    ms.dedup();
    let mut all_below = true;
    let mut t1_zero = true;
    let mut decreasing = true;
    for &n in &p.n {
        for &t in &p.t {
            let mut prev: Option<f64> = None;
            for &m in &ms {
                sink.start_point();
                let td = td_ghse_to_mixed(GhseParams::new(n, m)?, t)?;
                let env = moment_td_envelope(n, m, t);
                let point = [("n", n.to_string()), ("m", m.to_string()), ("t", t.to_string())];
                sink.push(&point, "exact_td", td, None);
                sink.push(&point, "envelope", env, None);
                all_below &= td <= env;
                if t == 1 {
                    t1_zero &= td < 1e-12;
                } else if let Some(prev) = prev {
                    decreasing &= td < prev;
                }
                prev = Some(td);
            }
        }
    }
    let mut out = sink.out;
    out.check("exact_td ≤ envelope", all_below, "every (n, m, t)");
    if p.t.contains(&1) {
        out.check("t = 1 gives zero distance", t1_zero, "below 1e-12");
    }
    if p.t.iter().any(|&t| t >= 2) {
        out.check("exact_td strictly decreasing in m", decreasing, "for each n and t ≥ 2");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep() {
        let cfg = ExperimentConfig {
            experiment: "ghse-moments".into(),
            seed: 1,
            output: None,
            parameters: GhseMomentsParams {
                n: vec![2],
                m: vec![1, 2, 3, 4, 5],
                t: vec![1, 2],
            },
        };
        let out = run(&cfg).unwrap();
        assert_eq!(out.rows.len(), 20);
        assert!(out.all_passed(), "{:?}", out.checks);
    }

    #[test]
    fn limits_are_enforced() {
        let p = GhseMomentsParams {
            n: vec![4],
            m: vec![0],
            t: vec![3],
        };
        assert!(p.validate().is_err());
        let p = GhseMomentsParams {
            n: vec![1],
            m: vec![0],
            t: vec![0],
        };
        assert!(p.validate().is_err());
    }
}
