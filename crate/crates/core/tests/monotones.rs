use std::time::Instant;

use num_complex::Complex64;
use prdm_core::ensembles::{sample_ghse, sample_haar_state, GhseParams, RngSeed};
use prdm_core::monotones::{
    check_witness, enumerate_stabilizer_states, hashing_entanglement_bound, lr_lower_bound_from_purification,
    reconstruct, relative_entropy_coherence, robustness_of_magic, stabilizer_fidelity, stabilizer_renyi_2, LpStatus,
};
use prdm_core::pseudostates::{make_prdm, Key, PrfSpec};
use prdm_core::qcore::{tensor, Bipartition, DensityMatrix, PureState};
use proptest::prelude::*;

fn t_state() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![
        Complex64::new(s, 0.0),
        Complex64::from_polar(s, std::f64::consts::FRAC_PI_4),
    ])
    .unwrap()
}

#[test]
fn all_two_qubit_stabilizer_projectors_are_free() {
    let stab = enumerate_stabilizer_states(2).unwrap();
    for phi in stab.states() {
        let sol = robustness_of_magic(&phi.projector(), &stab).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }
}

#[test]
fn robustness_is_stable_under_stabilizer_tensor_factors() {
    let stab1 = enumerate_stabilizer_states(1).unwrap();
    let stab2 = enumerate_stabilizer_states(2).unwrap();
    let t = t_state().projector();
    let r1 = robustness_of_magic(&t, &stab1).unwrap().objective;
    for sigma in stab1.states() {
        let joint = tensor(&t, &sigma.projector()).unwrap();
        let r2 = robustness_of_magic(&joint, &stab2).unwrap().objective;
        assert!((r1 - r2).abs() < 1e-6, "{r1} vs {r2}");
    }
}

#[test]
fn three_qubit_lp_solves_and_certifies() {
    let stab = enumerate_stabilizer_states(3).unwrap();
    let start = Instant::now();
    let zero2 = PureState::basis(2, 0).unwrap().projector();
    let rho = tensor(&t_state().projector(), &zero2).unwrap();
    let sol = robustness_of_magic(&rho, &stab).unwrap();
    eprintln!("n=3 T⊗|00⟩ LP: {:?}, {} pivots", start.elapsed(), sol.pivots);
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective - 2f64.sqrt()).abs() < 1e-6);
    assert!(reconstruct(&sol.coefficients, &stab).approx_eq(rho.matrix(), 1e-7));
    let check = check_witness(sol.witness.as_ref().unwrap(), &rho, &stab).unwrap();
    assert!(check.max_stabilizer_value <= 1.0 + 1e-6);
    assert!(check.value <= sol.objective + 1e-6);
    assert!((check.value - sol.objective).abs() < 1e-6);

    let mixed = DensityMatrix::maximally_mixed(3).unwrap();
    let free = robustness_of_magic(&mixed, &stab).unwrap();
    assert!(
        (free.objective - 1.0).abs() < 1e-9,
        "{:?} {}",
        free.status,
        free.objective
    );
}

#[test]
fn three_qubit_random_inputs_certify() {
    let stab = enumerate_stabilizer_states(3).unwrap();
    for s in 0..6 {
        let rho = if s % 2 == 0 {
            sample_haar_state(3, RngSeed::new(907, s)).unwrap().projector()
        } else {
            sample_ghse(GhseParams::new(3, 1).unwrap(), RngSeed::new(907, s)).unwrap()
        };
        let sol = robustness_of_magic(&rho, &stab).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(reconstruct(&sol.coefficients, &stab).approx_eq(rho.matrix(), 1e-7));
        let check = check_witness(sol.witness.as_ref().unwrap(), &rho, &stab).unwrap();
        assert!(check.max_stabilizer_value <= 1.0 + 1e-6);
        assert!((check.value - sol.objective).abs() < 1e-6);
    }
}

#[test]
fn random_states_respect_purification_bound() {
    let stab = enumerate_stabilizer_states(2).unwrap();
    for s in 0..50 {
        let psi = sample_haar_state(2, RngSeed::new(901, s)).unwrap();
        let sol = robustness_of_magic(&psi.projector(), &stab).unwrap();
        let bound = lr_lower_bound_from_purification(&psi, 0, &stab).unwrap();
        assert!(
            bound <= sol.log_robustness() + 1e-6,
            "{bound} > {}",
            sol.log_robustness()
        );
        let check = check_witness(sol.witness.as_ref().unwrap(), &psi.projector(), &stab).unwrap();
        assert!(check.max_stabilizer_value <= 1.0 + 1e-6);
        assert!(check.value <= sol.objective + 1e-6);
    }
}

#[test]
fn mixed_purifications_respect_bound() {
    let stab2 = enumerate_stabilizer_states(2).unwrap();
    let stab3 = enumerate_stabilizer_states(3).unwrap();
    for s in 0..20 {
        let psi = sample_haar_state(3, RngSeed::new(902, s)).unwrap();
        let reduced = psi.reduce(2).unwrap();
        let lr = robustness_of_magic(&reduced, &stab2).unwrap().log_robustness();
        let bound = lr_lower_bound_from_purification(&psi, 1, &stab3).unwrap();
        assert!(bound <= lr + 1e-6);
    }
}

#[test]
fn fidelity_is_bounded_by_renyi_entropy() {
    let stab = enumerate_stabilizer_states(2).unwrap();
    for s in 0..100 {
        let psi = sample_haar_state(2, RngSeed::new(903, s)).unwrap();
        let f = stabilizer_fidelity(&psi, &stab).unwrap();
        let m2 = stabilizer_renyi_2(&psi).unwrap();
        assert!(f <= 2f64.powf(-m2 / 4.0) + 1e-12);
    }
}

#[test]
fn prdm_coherence_is_at_least_n_minus_m() {
    let mut rng = RngSeed::new(904, 0).rng();
    for (n, m) in [(3, 1), (4, 2), (5, 1)] {
        for _ in 0..10 {
            let key = Key::random(n + m, &mut rng).unwrap();
            let rho = make_prdm(&key, PrfSpec::keyed_hash(n + m), n, m).unwrap();
            assert!(relative_entropy_coherence(&rho) >= (n - m) as f64 - 1e-8);
        }
    }
}

#[test]
fn hashing_raw_value_for_pure_states_is_marginal_entropy() {
    for s in 0..10 {
        let psi = sample_haar_state(4, RngSeed::new(905, s)).unwrap();
        let h = hashing_entanglement_bound(&psi.projector(), Bipartition::new(2, 2).unwrap()).unwrap();
        let s_a = prdm_core::qcore::von_neumann_entropy(&psi.reduce(2).unwrap());
        assert!((h.raw - s_a).abs() < 1e-8);
    }
}

#[test]
fn ghse_coherence_mean() {
    let p = GhseParams::new(5, 1).unwrap();
    let mean = (0..200)
        .map(|s| relative_entropy_coherence(&sample_ghse(p, RngSeed::new(906, s)).unwrap()))
        .sum::<f64>()
        / 200.0;
    assert!(mean >= 3.0, "{mean}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn renyi_entropy_is_additive(s in any::<u64>()) {
        let a = sample_haar_state(1, RngSeed::new(s, 0)).unwrap();
        let b = sample_haar_state(2, RngSeed::new(s, 1)).unwrap();
        let joint = a.tensor(&b).unwrap();
        let lhs = stabilizer_renyi_2(&joint).unwrap();
        let rhs = stabilizer_renyi_2(&a).unwrap() + stabilizer_renyi_2(&b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8);
    }

    #[test]
    fn dual_never_exceeds_primal(s in any::<u64>(), m in 0usize..3) {
        let stab = enumerate_stabilizer_states(2).unwrap();
        let rho = sample_ghse(GhseParams::new(2, m).unwrap(), RngSeed::new(s, 2)).unwrap();
        let sol = robustness_of_magic(&rho, &stab).unwrap();
        prop_assert!(sol.objective >= 1.0 - 1e-9);
        let check = check_witness(sol.witness.as_ref().unwrap(), &rho, &stab).unwrap();
        let scaled = check.value / check.max_stabilizer_value.max(1.0);
        prop_assert!(scaled <= sol.objective + 1e-6);
        prop_assert!(reconstruct(&sol.coefficients, &stab).approx_eq(rho.matrix(), 1e-7));
    }
}
