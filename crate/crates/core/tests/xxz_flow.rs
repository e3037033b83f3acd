use cre_core::poisson::StepControl;
use cre_core::xxz::{
    evolve_chain, local_hamiltonian_observable, ChainState, DEFAULT_LEAF_T, DEFAULT_SPREAD, DEFAULT_XI,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chain(seed: u64) -> ChainState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ChainState::random_on_leaf(3, DEFAULT_LEAF_T, DEFAULT_XI, DEFAULT_XI, DEFAULT_SPREAD, &mut rng).unwrap()
}

fn tau_drift(c: &ChainState, dt: f64) -> f64 {
    let h = local_hamiltonian_observable(DEFAULT_LEAF_T, c.xi_plus, c.xi_minus);
    let ev = evolve_chain(c, &h, 5.0, StepControl::fixed(dt), &[0.7, 1.3]).unwrap();
    assert!(ev.log_domain_exits.is_empty());
    ev.drifts()[c.n_sites()..].iter().copied().fold(0.0, f64::max)
}

#[test]
fn halving_the_step_cuts_transfer_drift_sixteenfold() {
    let c = chain(1);
    let drifts: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&dt| tau_drift(&c, dt)).collect();
    for w in drifts.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() <= 0.3, "observed order {order} from {drifts:?}");
    }
}

#[test]
fn three_site_flow_keeps_invariants() {
    let c = chain(7);
    let h = local_hamiltonian_observable(DEFAULT_LEAF_T, c.xi_plus, c.xi_minus);
    let ev = evolve_chain(&c, &h, 5.0, StepControl::fixed(0.002), &[0.7, 1.3, 1.9]).unwrap();
    assert!(ev.log_domain_exits.is_empty());
    let d = ev.drifts();
    assert!(d[..3].iter().all(|&x| x <= 1e-8), "{d:?}");
    assert!(d[3..].iter().all(|&x| x <= 1e-6), "{d:?}");
}
