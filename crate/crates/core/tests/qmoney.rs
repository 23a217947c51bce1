use std::sync::Arc;

use prdm_core::channels::{local_depolarizing_factored, SharedChannel};
use prdm_core::ensembles::RngSeed;
use prdm_core::pseudostates::Key;
use prdm_core::qcore::DensityMatrix;
use prdm_core::qmoney::{
    acceptance_probability, clone_attack, completeness_experiment, embezzle_attack, mint, note_fidelities, transport,
    verify, Banknote, MoneyConfig, NoteNoise, NoteState, Scheme,
};

fn cfg() -> MoneyConfig {
    MoneyConfig::defaults(Key::from_hex("a5a5a5a5deadbeef", None).unwrap())
}

#[test]
fn different_serials_give_nearly_orthogonal_notes() {
    let c = cfg();
    let mut total = 0.0;
    for s in 0..50u64 {
        let a = c.note_target(2 * s, 0).unwrap();
        let b = c.note_target(2 * s + 1, 0).unwrap();
        total += a.inner(&b).unwrap().norm_sqr();
    }
    assert!(total / 50.0 <= 0.1);
}

#[test]
fn transport_preserves_scheme_and_serials() {
    let c = cfg();
    let note = mint(&c, 9).unwrap();
    let same = transport(note.clone(), &NoteNoise::Identity).unwrap();
    assert_eq!(same, note);
    let ch: SharedChannel = Arc::new(local_depolarizing_factored(8, 0.1).unwrap());
    let mut small = c.clone();
    small.notes = 3;
    let noisy = transport(mint(&small, 9).unwrap(), &NoteNoise::Channel(ch)).unwrap();
    assert_eq!(noisy.note_serials, vec![9; 3]);
    let f = note_fidelities(&small, &noisy).unwrap();
    assert!(f.iter().all(|&x| x < 1.0 && x > 0.0));
    let wrong: SharedChannel = Arc::new(local_depolarizing_factored(4, 0.1).unwrap());
    assert!(transport(mint(&small, 9).unwrap(), &NoteNoise::Channel(wrong)).is_err());
}

#[test]
fn projection_probability_matches_dense_oracle() {
    let mut c = cfg();
    c.notes = 4;
    let noisy = transport(mint(&c, 1).unwrap(), &NoteNoise::GlobalDepolarizing(0.4)).unwrap();
    let fids = note_fidelities(&c, &noisy).unwrap();
    for (i, note) in noisy.notes.iter().enumerate() {
        let rho = note.to_density_matrix().unwrap();
        let proj = c.note_target(1, i).unwrap().projector();
        let direct = rho.matrix().trace_product(proj.matrix()).unwrap().re;
        assert!((fids[i] - direct).abs() < 1e-12);
        assert!((direct - (0.6 + 0.4 / 256.0)).abs() < 1e-12);
    }
}

#[test]
fn maximally_mixed_banknote_is_rejected() {
    let c = cfg();
    let exact = acceptance_probability(&[1.0 / 256.0; 64], c.threshold());
    assert!(exact <= 1e-6);
    let junk = Banknote {
        serial: 4,
        scheme: Scheme::SingleSerial,
        note_serials: vec![4; 64],
        notes: vec![NoteState::maximally_mixed(8); 64],
    };
    assert!(!verify(&c, junk, RngSeed::new(0, 0)).unwrap().accepted);
}

#[test]
fn completeness_respects_chernoff_envelope_and_improves_with_length() {
    let mut c = cfg();
    c.f_min = 0.6;
    let mut last = f64::INFINITY;
    for l in [25, 50, 100, 200] {
        c.notes = l;
        let r = completeness_experiment(
            &c,
            &NoteNoise::GlobalDepolarizing(0.3),
            1000,
            RngSeed::new(40, l as u64),
        )
        .unwrap();
        assert!(!r.assumption_violated);
        assert!(r.empirical_error <= r.chernoff_bound + 3.0 * r.std_error);
        assert!(r.empirical_error <= last, "L={l}");
        last = r.empirical_error;
    }
    c.notes = 50;
    let r = completeness_experiment(&c, &NoteNoise::Identity, 100, RngSeed::new(41, 0)).unwrap();
    assert_eq!(r.empirical_error, 0.0);
    let r = completeness_experiment(&c, &NoteNoise::GlobalDepolarizing(0.5), 10, RngSeed::new(41, 1)).unwrap();
    assert!(r.assumption_violated);
}

#[test]
fn embezzling_breaks_only_the_per_note_serial_scheme() {
    let mut c = cfg();
    c.notes = 16;
    c.scheme = Scheme::PerNoteSerial;
    let weak = embezzle_attack(&c, 16, 100, RngSeed::new(42, 0)).unwrap();
    assert_eq!(weak.counterfeit_accept_rate, 1.0);
    assert_eq!(weak.victims_still_valid_rate, 1.0);
    c.scheme = Scheme::SingleSerial;
    let strong = embezzle_attack(&c, 16, 100, RngSeed::new(42, 0)).unwrap();
    assert_eq!(strong.counterfeit_accept_rate, 0.0);
    assert!(strong.counterfeit_exact < 1e-12);
    assert_eq!(strong.victims_still_valid_rate, 1.0);
    assert!(strong.counterfeit_accept_rate <= weak.counterfeit_accept_rate);
    assert!(embezzle_attack(&c, 15, 10, RngSeed::new(42, 0)).is_err());
}

#[test]
fn measure_and_prepare_clones_fail() {
    let c = cfg();
    let r = clone_attack(&c, 50, RngSeed::new(43, 0)).unwrap();
    assert!((r.mean_note_fidelity - 1.0 / 256.0).abs() < 1e-12);
    assert!(r.exact_acceptance <= 1e-6);
    assert_eq!(r.acceptance_rate, 0.0);
}

#[test]
fn full_depolarizing_leaves_only_noise() {
    let mut c = cfg();
    c.notes = 2;
    let gone = transport(mint(&c, 2).unwrap(), &NoteNoise::GlobalDepolarizing(1.0)).unwrap();
    let mixed = DensityMatrix::maximally_mixed(8).unwrap();
    for n in &gone.notes {
        assert!(n.to_density_matrix().unwrap().matrix().approx_eq(mixed.matrix(), 1e-14));
    }
}
