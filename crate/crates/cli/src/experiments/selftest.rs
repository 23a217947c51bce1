//! Fast invariant suite over every module. Each invariant is one row (its
//! measured deviation or value) and one check.

use num_complex::Complex64;
use prdm_core::channels::{dephasing, depolarizing_global, depolarizing_local, is_unital, local_depolarizing_factored};
use prdm_core::distinguishers::{efi_gap, prdm_key_average, swap_test_prob};
use prdm_core::ensembles::{moment_td_envelope, sample_ghse, td_ghse_to_mixed, GhseParams, RngSeed};
use prdm_core::monotones::{
    check_witness, enumerate_stabilizer_states, relative_entropy_coherence, robustness_of_magic, stabilizer_count,
};
use prdm_core::pseudostates::{make_prdm, vprdm_make, vprdm_verify, Key, PrfKind, PrfSpec};
use prdm_core::qcore::{purity, DensityMatrix, PureState};
use prdm_core::qmoney::{acceptance_probability, mint, note_fidelities, MoneyConfig};
use serde::{Deserialize, Serialize};

use super::RunError;
use crate::config::{ensure, ConfigError, ExperimentConfig, Parameters};
use crate::output::{RowSink, RunOutput};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelftestParams {
    /// Random instances per sampled invariant.
    pub samples: usize,
}

impl Default for SelftestParams {
    fn default() -> Self {
        Self { samples: 8 }
    }
}

impl Parameters for SelftestParams {
    fn validate(&self) -> Result<(), ConfigError> {
        ensure((1..=1000).contains(&self.samples), "samples", "must lie in 1..=1000")
    }
}

struct Suite {
    sink: RowSink,
    checks: Vec<(String, bool, String)>,
}

impl Suite {
    fn record(&mut self, name: &str, value: f64, passed: bool, detail: String) {
        self.sink.start_point();
        self.sink.push(&[("invariant", name.to_string())], "value", value, None);
        self.checks.push((name.to_string(), passed, detail));
    }
}

pub fn run(cfg: &ExperimentConfig<SelftestParams>) -> Result<RunOutput, RunError> {
    let samples = cfg.parameters.samples as u64;
    let seed = |tag: u64| RngSeed::new(cfg.seed, tag);
    let mut s = Suite {
        sink: RowSink::new(&cfg.experiment, cfg.seed, &cfg.parameters),
        checks: Vec::new(),
    };

    let mut counts_ok = true;
    for (n, want) in [(1usize, 6u64), (2, 60), (3, 1080)] {
        counts_ok &= stabilizer_count(n) == want && enumerate_stabilizer_states(n)?.states().len() as u64 == want;
    }
    s.record(
        "stabilizer counts 6/60/1080",
        f64::from(u8::from(counts_ok)),
        counts_ok,
        String::new(),
    );

    let stab1 = enumerate_stabilizer_states(1)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = PureState::new(vec![
        Complex64::new(h, 0.0),
        Complex64::from_polar(h, std::f64::consts::FRAC_PI_4),
    ])?;
    let sol = robustness_of_magic(&t.projector(), &stab1)?;
    let witness_ok = match &sol.witness {
        Some(w) => {
            let c = check_witness(w, &t.projector(), &stab1)?;
            c.max_stabilizer_value <= 1.0 + 1e-6 && (c.value - sol.objective).abs() < 1e-6
        }
        None => false,
    };
    let err = (sol.objective - 2f64.sqrt()).abs();
    s.record(
        "robustness of T is √2 with a dual certificate",
        sol.objective,
        err < 1e-5 && witness_ok,
        format!("|R − √2| = {err:e}"),
    );

    let mut unital = true;
    for n in 1..=3 {
        unital &= is_unital(&depolarizing_local(n, 0.3)?, 1e-10)?;
        unital &= is_unital(&local_depolarizing_factored(n, 0.3)?, 1e-10)?;
        unital &= is_unital(&depolarizing_global(n, 0.3)?, 1e-10)?;
        unital &= is_unital(&dephasing(n), 1e-10)?;
    }
    s.record(
        "channels fix I/2^n",
        f64::from(u8::from(unital)),
        unital,
        "within 1e-10".into(),
    );

    let mut swap_dev: f64 = 0.0;
    for i in 0..samples {
        let a = sample_ghse(GhseParams::new(2, 1)?, seed(100).derive(i))?;
        let b = sample_ghse(GhseParams::new(2, 1)?, seed(101).derive(i))?;
        let overlap = a.matrix().matmul(b.matrix())?.trace().re;
        swap_dev = swap_dev.max((swap_test_prob(&a, &b)? - 0.5 * (1.0 + overlap)).abs());
        swap_dev = swap_dev.max((swap_test_prob(&a, &a)? - 0.5 * (1.0 + purity(&a))).abs());
    }
    s.record(
        "SWAP acceptance is ½(1 + tr ρσ)",
        swap_dev,
        swap_dev < 1e-10,
        format!("{swap_dev:e}"),
    );

    let mut envelope_ok = true;
    for n in 1..=2 {
        for m in 0..=3 {
            envelope_ok &= td_ghse_to_mixed(GhseParams::new(n, m)?, 2)? <= moment_td_envelope(n, m, 2);
        }
    }
    s.record(
        "two-copy GHSE distance below envelope",
        f64::from(u8::from(envelope_ok)),
        envelope_ok,
        String::new(),
    );

    let mut rng = seed(200).rng();
    let mut min_gap = f64::INFINITY;
    let mut diag_exact = true;
    for _ in 0..samples {
        let (n, m) = (4, 1);
        let key = Key::random(n + m, &mut rng)?;
        let rho = make_prdm(&key, PrfSpec::keyed_hash(n + m), n, m)?;
        let target = 1.0 / rho.dim() as f64;
        diag_exact &= rho.matrix().diagonal().iter().all(|z| z.re == target && z.im == 0.0);
        min_gap = min_gap.min(relative_entropy_coherence(&rho) - (n - m) as f64);
    }
    s.record(
        "PRDM diagonal uniform and C ≥ n − m",
        min_gap,
        diag_exact && min_gap >= -1e-8,
        format!("min C − (n − m) = {min_gap:e}"),
    );

    let mut vprdm_dev: f64 = 0.0;
    let mut mixed_dev: f64 = 0.0;
    for i in 0..samples {
        let key = Key::random(32, &mut rng)?;
        let (n, m) = (2 + (i as usize % 4), i as usize % 2);
        let rho = vprdm_make(&key, n, m, 6)?;
        vprdm_dev = vprdm_dev.max((vprdm_verify(&rho, &key, m, 6)? - 1.0).abs());
        let mixed = DensityMatrix::maximally_mixed(n)?;
        let want = 2f64.powi(-((n - m) as i32));
        mixed_dev = mixed_dev.max((vprdm_verify(&mixed, &key, m, 6)? - want).abs());
    }
    s.record(
        "VPRDM completeness is 1",
        vprdm_dev,
        vprdm_dev < 1e-9,
        format!("{vprdm_dev:e}"),
    );
    s.record(
        "VPRDM accepts I/2^n with 2^−(n−m)",
        mixed_dev,
        mixed_dev < 1e-12,
        format!("{mixed_dev:e}"),
    );

    let money = MoneyConfig::defaults(Key::from_hex("0123456789abcdef0123456789abcdef", None)?);
    let threshold = money.threshold();
    let want = ((money.f_min + money.eta) * money.notes as f64 - 1e-9).ceil() as usize;
    let note = mint(&money, 7)?;
    let fids = note_fidelities(&money, &note)?;
    let p_accept = acceptance_probability(&fids, threshold);
    let fid_dev = fids.iter().map(|f| (f - 1.0).abs()).fold(0.0, f64::max);
    s.record(
        "fresh banknote accepted with certainty",
        p_accept,
        threshold == want && fid_dev < 1e-10 && (p_accept - 1.0).abs() < 1e-12,
        format!("threshold {threshold}, max |F − 1| = {fid_dev:e}"),
    );

    let avg = prdm_key_average(PrfKind::KeyedHash, 3, 1, 6, 64, seed(300))?;
    let gap = efi_gap(&avg.state)?;
    s.record(
        "key-averaged PRDM: exact TD ≥ Fannes bound",
        gap.exact_td - gap.fannes_lower_bound,
        gap.exact_td >= gap.fannes_lower_bound - 1e-8 && gap.s0 <= 7.0 + 1e-9,
        format!(
            "TD {:.6}, bound {:.6}, S {:.6}",
            gap.exact_td, gap.fannes_lower_bound, gap.s0
        ),
    );

    let mut out = s.sink.out;
    for (name, ok, detail) in s.checks {
        out.check(name, ok, detail);
    }
    Ok(out)
}
