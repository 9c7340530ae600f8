mod common;

use qdrive_core::model::{diamond_preset, lambda_preset, v_preset, DiamondMode};
use qdrive_core::{
    evolve, propagate_exact, steady_states, DensityMatrix, Error, InitialState, Liouvillian, RunProtocol, SystemSpec,
    Termination, Trajectory,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn presets() -> Vec<SystemSpec> {
    vec![
        lambda_preset(0.5, 0.0).unwrap(),
        lambda_preset(0.5, 0.1).unwrap(),
        v_preset(0.5, 0.0).unwrap(),
        diamond_preset(DiamondMode::Avoid, 0.5, 0.5, 0.5).unwrap(),
        diamond_preset(DiamondMode::Seek, 0.5, 0.2, 0.4).unwrap(),
    ]
}

fn protocol_for(spec: &SystemSpec, t_max: f64) -> RunProtocol {
    RunProtocol { t_max, initial_state: InitialState::default_for(spec), ..RunProtocol::default() }
}

fn sample_at(tr: &Trajectory, t: f64) -> &DensityMatrix {
    &tr.samples.iter().find(|s| (s.time - t).abs() < 1e-12).expect("sample on grid").state
}

#[test]
fn trajectories_stay_physical() {
    for spec in presets() {
        let tr = evolve(&spec, &protocol_for(&spec, 100.0)).unwrap();
        for s in &tr.samples {
            assert!((s.state.matrix().trace().re - 1.0).abs() < 1e-10);
            assert!(s.state.matrix().hermiticity_defect() < 1e-14);
            assert!(s.state.min_eigenvalue() >= -1e-9);
        }
    }
}

#[test]
fn presets_match_matrix_exponential() {
    for spec in presets() {
        let protocol = RunProtocol { steady_eps: 0.0, ..protocol_for(&spec, 50.0) };
        let tr = evolve(&spec, &protocol).unwrap();
        let l = Liouvillian::new(&spec);
        let rho0 = sample_at(&tr, 0.0).clone();
        for t in [1.0, 10.0, 50.0] {
            let exact = propagate_exact(&l, &rho0, t).unwrap();
            let err = common::max_diff(sample_at(&tr, t).matrix(), exact.matrix());
            assert!(err < 1e-7, "t={t}: {err}");
        }
    }
}

#[test]
fn tighter_tolerance_reduces_error() {
    let spec = diamond_preset(DiamondMode::Seek, 0.5, 0.2, 0.4).unwrap();
    let l = Liouvillian::new(&spec);
    let error_at = |rtol: f64| {
        let protocol =
            RunProtocol { rtol, atol: rtol * 1e-2, steady_eps: 0.0, sample_interval: 1.0, ..protocol_for(&spec, 20.0) };
        let tr = evolve(&spec, &protocol).unwrap();
        let exact = propagate_exact(&l, sample_at(&tr, 0.0), 20.0).unwrap();
        common::max_diff(tr.last().state.matrix(), exact.matrix())
    };
    let coarse = error_at(1e-5);
    let fine = error_at(1e-9);
    assert!(fine < coarse, "{fine} vs {coarse}");
    assert!(fine < 1e-8);
}

#[test]
fn work_matches_trapezoid_of_power() {
    for spec in presets() {
        let protocol = RunProtocol { sample_interval: 0.01, ..protocol_for(&spec, 50.0) };
        let tr = evolve(&spec, &protocol).unwrap();
        let post: Vec<_> = tr.samples.iter().filter(|s| s.time >= 0.0).collect();
        let mut w = 0.0;
        for pair in post.windows(2) {
            let dt = pair[1].time - pair[0].time;
            w += 0.5 * dt * (pair[0].energetics.power_total + pair[1].energetics.power_total);
        }
        let last = post.last().unwrap();
        assert!((last.energetics.work_accum - w).abs() < 1e-4, "{} vs {w}", last.energetics.work_accum);
        let de = last.energetics.energy - post[0].energetics.energy;
        let w_plus_q = last.energetics.work_accum + last.energetics.heat_accum_total;
        assert!((de - w_plus_q).abs() < 1e-8);
    }
}

#[test]
fn steady_state_is_a_fixed_point() {
    for spec in presets() {
        let l = Liouvillian::new(&spec);
        let rho = steady_states(&l).unwrap().unique().unwrap().clone();
        let protocol = RunProtocol {
            initial_state: InitialState::Explicit(rho.clone()),
            pre_window: 0.0,
            steady_eps: 0.0,
            ..protocol_for(&spec, 20.0)
        };
        let tr = evolve(&spec, &protocol).unwrap();
        assert!(common::max_diff(tr.last().state.matrix(), rho.matrix()) < 1e-9);
    }
}

#[test]
fn exact_propagation_is_a_semigroup() {
    let mut rng = StdRng::seed_from_u64(21);
    for d in [3, 4, 3, 4] {
        let spec = common::random_spec(&mut rng, d);
        let l = Liouvillian::new(&spec);
        let rho = common::random_state(&mut rng, d);
        let (t, s) = (0.7, 2.3);
        let two_steps = propagate_exact(&l, &propagate_exact(&l, &rho, t).unwrap(), s).unwrap();
        let one_step = propagate_exact(&l, &rho, t + s).unwrap();
        assert!(common::max_diff(two_steps.matrix(), one_step.matrix()) < 1e-12);
    }
}

#[test]
fn long_runs_relax_to_the_null_space() {
    for spec in presets() {
        let tr = evolve(&spec, &protocol_for(&spec, 1000.0)).unwrap();
        assert_eq!(tr.termination, Termination::SteadyDetected);
        let rho = steady_states(&Liouvillian::new(&spec)).unwrap().unique().unwrap().clone();
        assert!(common::max_diff(tr.last().state.matrix(), rho.matrix()) < 1e-6);
    }
}

#[test]
fn pre_window_is_stationary_and_undriven() {
    let spec = diamond_preset(DiamondMode::Seek, 0.5, 0.2, 0.4).unwrap();
    let tr = evolve(&spec, &protocol_for(&spec, 5.0)).unwrap();
    let pre: Vec<_> = tr.samples.iter().filter(|s| s.time < 0.0).collect();
    assert_eq!(pre.len(), 20);
    assert!((pre[0].time + 2.0).abs() < 1e-12);
    let start = sample_at(&tr, 0.0);
    for s in pre {
        assert_eq!(s.energetics.power_total, 0.0);
        assert_eq!(s.energetics.work_accum, 0.0);
        assert_eq!(&s.state, start);
    }
}

#[test]
fn degenerate_undriven_generator_needs_explicit_state() {
    let spec = lambda_preset(0.5, 0.0).unwrap();
    let protocol = RunProtocol { initial_state: InitialState::UndrivenSteady, ..RunProtocol::default() };
    assert!(matches!(evolve(&spec, &protocol), Err(Error::DegenerateSteadyState { dimension: 4 })));
}
