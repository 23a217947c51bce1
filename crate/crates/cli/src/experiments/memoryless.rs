//! Memoryless single-copy learners against two hypotheses, swept over the
//! number of copies, with a pure-singleton control.

use std::str::FromStr;

use prdm_core::distinguishers::{memoryless_sim, EnsembleSampler, Policy};
use prdm_core::ensembles::{GhseParams, RngSeed};
use prdm_core::pseudostates::PrfKind;
use prdm_core::qcore::PureState;
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::config::{ensure, ConfigError, ExperimentConfig, Parameters};
use crate::output::{RowSink, RunOutput};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MemorylessParams {
    pub n: usize,
    pub copies: Vec<usize>,
    pub trials: usize,
    pub policies: Vec<String>,
    /// One of `haar`, `mixed`, `basis-zero`, `ghse:<m>`, `prdm:<m>`.
    pub hypothesis_a: String,
    pub hypothesis_b: String,
    pub control: bool,
    pub control_copies: usize,
}

impl Default for MemorylessParams {
    fn default() -> Self {
        Self {
            n: 3,
            copies: vec![0, 8, 32],
            trials: 2000,
            policies: Policy::ALL.iter().map(|p| policy_name(*p).to_string()).collect(),
            hypothesis_a: "haar".into(),
            hypothesis_b: "mixed".into(),
            control: true,
            control_copies: 8,
        }
    }
}

fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::ComputationalBasis => "computational-basis",
        Policy::FreshHaarBasis => "fresh-haar-basis",
        Policy::TranscriptGreedy => "transcript-greedy",
    }
}

fn hypothesis(spec: &str, n: usize, key: &'static str) -> Result<EnsembleSampler, ConfigError> {
    let bad = |reason: String| ConfigError::Invalid { key, reason };
    let (name, arg) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    let mixedness = || -> Result<usize, ConfigError> {
        let m: usize = arg
            .ok_or_else(|| bad(format!("`{name}` needs a mixedness, e.g. `{name}:1`")))?
            .parse()
            .map_err(|_| bad(format!("bad mixedness in `{spec}`")))?;
        if n + m > 12 {
            return Err(bad("need n + m ≤ 12".into()));
        }
        Ok(m)
    };
    let no_arg = || match arg {
        Some(_) => Err(bad(format!("`{name}` takes no argument"))),
        None => Ok(()),
    };
    let core = |e: prdm_core::Error| bad(e.to_string());
    match name {
        "haar" => no_arg().map(|_| EnsembleSampler::haar(n)),
        "mixed" => {
            no_arg()?;
            EnsembleSampler::maximally_mixed(n).map_err(core)
        }
        "basis-zero" => {
            no_arg()?;
            let rho = PureState::basis(n, 0).map_err(core)?.projector();
            Ok(EnsembleSampler::fixed("basis-zero", rho))
        }
        "ghse" => Ok(EnsembleSampler::ghse(GhseParams::new(n, mixedness()?).map_err(core)?)),
        "prdm" => Ok(EnsembleSampler::prdm(n, mixedness()?, PrfKind::KeyedHash)),
        other => Err(bad(format!("unknown hypothesis `{other}`"))),
    }
}

impl MemorylessParams {
    fn parsed_policies(&self) -> Result<Vec<Policy>, ConfigError> {
        self.policies
            .iter()
            .map(|s| {
                Policy::from_str(s).map_err(|_| ConfigError::Invalid {
                    key: "policies",
                    reason: format!("unknown policy `{s}`"),
                })
            })
            .collect()
    }
}

impl Parameters for MemorylessParams {
    fn validate(&self) -> Result<(), ConfigError> {
        ensure((1..=8).contains(&self.n), "n", "must lie in 1..=8")?;
        ensure(!self.copies.is_empty(), "copies", "need at least one value")?;
        ensure(self.trials >= 1, "trials", "need at least one trial")?;
        ensure(!self.policies.is_empty(), "policies", "need at least one policy")?;
        self.parsed_policies()?;
        hypothesis(&self.hypothesis_a, self.n, "hypothesis_a")?;
        hypothesis(&self.hypothesis_b, self.n, "hypothesis_b")?;
        Ok(())
    }
}

pub fn run(cfg: &ExperimentConfig<MemorylessParams>) -> Result<RunOutput, RunError> {
    let par = &cfg.parameters;
    let mut sink = RowSink::new(&cfg.experiment, cfg.seed, par);
    let a = hypothesis(&par.hypothesis_a, par.n, "hypothesis_a")?;
    let b = hypothesis(&par.hypothesis_b, par.n, "hypothesis_b")?;
    let policies = par.parsed_policies()?;
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    for (pi, policy) in policies.iter().enumerate() {
        let name = policy_name(*policy);
        for &t in &par.copies {
            sink.start_point();
            let seed = RngSeed::new(cfg.seed, (pi * 10_000 + t) as u64);
            let r = memoryless_sim(&a, &b, policy, t, par.trials, seed)?;
            let point = [
                ("policy", name.to_string()),
                ("hypotheses", format!("{}|{}", par.hypothesis_a, par.hypothesis_b)),
                ("n", par.n.to_string()),
                ("copies", t.to_string()),
            ];
            let (s, se) = (r.success(), r.success_std_error());
            sink.push(&point, "success", s, Some(se));
            sink.push(&point, "advantage", r.advantage, Some(r.std_error));
            if t == 0 {
                checks.push((
                    format!("{name}, 0 copies: success is exactly ½"),
                    s == 0.5,
                    format!("{s}"),
                ));
            } else {
                let bound = 0.5 + 5.0 * se;
                checks.push((
                    format!("{name}, {t} copies: success ≤ ½ + 5σ"),
                    s <= bound,
                    format!("{s:.4} vs {bound:.4}"),
                ));
            }
        }
    }
    if par.control {
        sink.start_point();
        let zero = hypothesis("basis-zero", par.n, "control")?;
        let mixed = hypothesis("mixed", par.n, "control")?;
        let seed = RngSeed::new(cfg.seed, 999_999);
        let r = memoryless_sim(
            &zero,
            &mixed,
            &Policy::ComputationalBasis,
            par.control_copies,
            par.trials,
            seed,
        )?;
        let point = [
            ("policy", "computational-basis".to_string()),
            ("hypotheses", "basis-zero|mixed".to_string()),
            ("n", par.n.to_string()),
            ("copies", par.control_copies.to_string()),
        ];
        sink.push(&point, "success", r.success(), Some(r.success_std_error()));
        sink.push(&point, "advantage", r.advantage, Some(r.std_error));
        checks.push((
            format!("singleton control, {} copies: success ≥ 0.95", par.control_copies),
            r.success() >= 0.95,
            format!("{:.4}", r.success()),
        ));
    }
    let mut out = sink.out;
    for (name, ok, detail) in checks {
        out.check(name, ok, detail);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypothesis_names() {
        for ok in ["haar", "mixed", "basis-zero", "ghse:1", "prdm:2"] {
            assert!(hypothesis(ok, 3, "h").is_ok(), "{ok}");
        }
        for bad in ["ghse", "haar:1", "prdm:x", "nope", "ghse:20"] {
            assert!(hypothesis(bad, 3, "h").is_err(), "{bad}");
        }
    }

    #[test]
    fn unknown_policy_is_rejected() {
        let p = MemorylessParams {
            policies: vec!["psychic".into()],
            ..Default::default()
        };
        assert!(matches!(
            p.validate(),
            Err(ConfigError::Invalid { key: "policies", .. })
        ));
    }
}
