//! Acceptance criteria A1–A10.
//!
//! Each test prints one `PASS`/`FAIL` line (written straight to stderr so it
//! shows up even when libtest captures output) and then asserts.

mod common;

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use qdrive_core::energetics::{gamma, heat_currents, power};
use qdrive_core::model::{bose_occupancy, diamond_preset, lambda_preset, v_preset, DiamondMode};
use qdrive_core::steady::{lambda_power_closed_form, lambda_power_low_temperature, lambda_work_heat_relations};
use qdrive_core::{
    evolve, gibbs_state, propagate_exact, steady_states, DensityMatrix, InitialState, Liouvillian, RunProtocol,
    SystemSpec, Trajectory,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn report(id: &str, pass: bool, detail: &str) {
    let line = format!("[acceptance] {id}: {} | {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{id} failed: {detail}");
}

fn steady_unique(spec: &SystemSpec) -> (Liouvillian, DensityMatrix) {
    let l = Liouvillian::new(spec);
    let s = steady_states(&l).unwrap();
    assert_eq!(s.null_dimension, 1, "expected a unique steady state");
    let rho = s.states[0].clone();
    (l, rho)
}

fn group(spec: &SystemSpec, l: &Liouvillian, rho: &DensityMatrix) -> (f64, f64) {
    let g = heat_currents(spec, l, rho).by_group.unwrap();
    (g["L"], g["R"])
}

fn run(spec: &SystemSpec, protocol: RunProtocol) -> (Trajectory, Duration) {
    let start = Instant::now();
    let tr = evolve(spec, &protocol).unwrap();
    (tr, start.elapsed())
}

/// Every figure trajectory, run once and shared by the tests that need it.
fn figure_runs() -> &'static Vec<(String, Trajectory)> {
    static RUNS: OnceLock<Vec<(String, Trajectory)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let p = RunProtocol::default();
        let two_bath = RunProtocol { initial_state: InitialState::UndrivenSteady, ..p.clone() };
        let mut cases: Vec<(String, SystemSpec, RunProtocol)> = vec![
            ("fig1 T=0".into(), lambda_preset(0.5, 0.0).unwrap(), p.clone()),
            ("fig1 T=0.1".into(), lambda_preset(0.5, 0.1).unwrap(), p.clone()),
            ("fig2 T=0".into(), v_preset(0.5, 0.0).unwrap(), p.clone()),
            ("fig2 T=0.3".into(), v_preset(0.5, 0.3).unwrap(), p.clone()),
            ("A3 Ω=0.1".into(), lambda_preset(0.1, 0.0).unwrap(), p.clone()),
        ];
        for (mode, name) in [(DiamondMode::Avoid, "fig3a"), (DiamondMode::Seek, "fig3b")] {
            for omega in [0.4, 0.5] {
                cases.push((format!("{name} Ω={omega}"), diamond_preset(mode, omega, 0.5, 0.5).unwrap(), p.clone()));
            }
        }
        for (mode, name) in [(DiamondMode::Seek, "fig4"), (DiamondMode::Avoid, "fig5")] {
            for (tl, tr, sub) in [(0.2, 0.4, "a"), (0.4, 0.2, "b")] {
                cases.push((format!("{name}{sub}"), diamond_preset(mode, 0.5, tl, tr).unwrap(), two_bath.clone()));
            }
        }
        cases.into_iter().map(|(n, s, p)| (n, evolve(&s, &p).unwrap())).collect()
    })
}

fn trajectory(name: &str) -> &'static Trajectory {
    &figure_runs().iter().find(|(n, _)| n == name).unwrap().1
}

#[test]
fn a1_lambda_energy_avoiding() {
    let spec = lambda_preset(0.5, 0.0).unwrap();
    let protocol = RunProtocol { t_max: 200.0, steady_eps: 0.0, ..RunProtocol::default() };
    let (tr, elapsed) = run(&spec, protocol);
    let last = tr.last();
    let p_b = last.state.population(1);
    let p = last.energetics.power_total;

    let warm = lambda_preset(0.5, 0.1).unwrap();
    let (_, rho) = steady_unique(&warm);
    let p_numeric = power(&warm, &rho).total;
    let closed =
        lambda_power_closed_form(0.5, bose_occupancy(1.0, 0.1).unwrap(), bose_occupancy(0.99, 0.1).unwrap()).unwrap();
    let rel = ((p_numeric - closed) / closed).abs();

    let pass = last.time == 200.0 && p_b >= 0.999 && p <= 1e-6 && rel <= 1e-6 && elapsed < Duration::from_secs(5);
    report(
        "A1",
        pass,
        &format!(
            "p_b(200)={p_b:.9}, P(200)={p:.3e}, T=0.1 P∞ numeric={p_numeric:.9e} closed={closed:.9e} rel={rel:.1e}, runtime={elapsed:.2?}"
        ),
    );
}

#[test]
fn a2_v_energy_seeking() {
    let spec = v_preset(0.5, 0.0).unwrap();
    let (_, rho) = steady_unique(&spec);
    let (g, a) = (0, 2);
    let rho_aa = rho.population(a);
    let im_ag = rho.get(a, g).im;
    let p = power(&spec, &rho).total;
    let (tr, _) = run(&spec, RunProtocol::default());
    let end_diff = common::max_diff(tr.last().state.matrix(), rho.matrix());
    let third = 1.0 / 3.0;
    let pass = (rho_aa - third).abs() <= 1e-8
        && (im_ag + third).abs() <= 1e-8
        && (p - third).abs() <= 1e-8
        && end_diff <= 1e-6;
    report(
        "A2",
        pass,
        &format!("ρ_aa={rho_aa:.12}, Im ρ_ag={im_ag:.12}, P∞={p:.12}, |evolve − null space|={end_diff:.1e}"),
    );
}

#[test]
fn a3_work_heat_relations() {
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for (omega, name) in [(0.1, "A3 Ω=0.1"), (0.5, "fig1 T=0")] {
        let tr = trajectory(name);
        assert_eq!(tr.spec, lambda_preset(omega, 0.0).unwrap());
        let c = lambda_work_heat_relations(tr).unwrap();
        worst = worst.max(c.w_check).max(c.q_check);
        details.push(format!(
            "Ω={omega}: ρ_bb={:.9} W={:.9} Q={:.9} w_check={:.1e} q_check={:.1e} (t_end={})",
            c.rho_bb,
            c.work,
            c.heat,
            c.w_check,
            c.q_check,
            tr.last().time
        ));
    }
    report("A3", worst < 1e-5, &details.join("; "));
}

#[test]
fn a4_low_temperature_expansion() {
    let mut worst_ratio: f64 = 0.0;
    let mut failures = Vec::new();
    for omega in [0.3, 0.5, 1.0] {
        for n_ea in [1e-4, 1e-3] {
            for n_eb in [1e-4, 1e-3] {
                let full = lambda_power_closed_form(omega, n_ea, n_eb).unwrap();
                let series = lambda_power_low_temperature(omega, n_ea, n_eb);
                let bound = 10.0 * n_eb * n_eb * n_eb;
                let ratio = (full - series).abs() / bound;
                worst_ratio = worst_ratio.max(ratio);
                if ratio > 1.0 {
                    failures.push(format!(
                        "(Ω={omega}, n_ea={n_ea:e}, n_eb={n_eb:e}): |Δ|={:.2e} > {bound:.1e}",
                        (full - series).abs()
                    ));
                }
            }
        }
    }
    report(
        "A4",
        failures.is_empty(),
        &format!("worst |Δ|/(10 n_eb³) = {worst_ratio:.2}; violations: [{}]", failures.join(", ")),
    );
}

#[test]
fn a5_self_adaptive_shift() {
    let pop_a = |mode, omega| {
        let spec = diamond_preset(mode, omega, 0.5, 0.5).unwrap();
        let (_, rho) = steady_unique(&spec);
        (rho.population(1), power(&spec, &rho).total)
    };
    let (avoid0, _) = pop_a(DiamondMode::Avoid, 0.0);
    let (avoid4, _) = pop_a(DiamondMode::Avoid, 0.4);
    let (avoid5, p_avoid) = pop_a(DiamondMode::Avoid, 0.5);
    let (seek0, _) = pop_a(DiamondMode::Seek, 0.0);
    let (seek4, _) = pop_a(DiamondMode::Seek, 0.4);
    let (seek5, p_seek) = pop_a(DiamondMode::Seek, 0.5);
    let margin = 1e-6;
    let pass = avoid4 - avoid5 > margin
        && avoid0 - avoid4 > margin
        && seek5 - seek4 > margin
        && seek4 - seek0 > margin
        && p_seek - p_avoid > margin;
    report(
        "A5",
        pass,
        &format!(
            "avoid ρ_aa(0,0.4,0.5)=({avoid0:.6},{avoid4:.6},{avoid5:.6}); seek ρ_aa=({seek0:.6},{seek4:.6},{seek5:.6}); P seek={p_seek:.6} avoid={p_avoid:.6}"
        ),
    );
}

#[test]
fn a6_self_organized_gradient() {
    let mut pass = true;
    let mut details = Vec::new();
    for (tl, tr) in [(0.2, 0.4), (0.4, 0.2)] {
        let spec = diamond_preset(DiamondMode::Seek, 0.5, tl, tr).unwrap();
        let (l, rho) = steady_unique(&spec);
        let (jl, jr) = group(&spec, &l, &rho);
        let undriven = spec.undriven();
        let (l0, rho0) = steady_unique(&undriven);
        let (jl0, jr0) = group(&undriven, &l0, &rho0);
        let hotter_positive = if tl > tr { jl0 > 0.0 } else { jr0 > 0.0 };
        pass &= jl.abs() > jr.abs() && (jl0 + jr0).abs() < 1e-10 && hotter_positive;
        details.push(format!("T=({tl},{tr}): J_L∞={jl:.6} J_R∞={jr:.6}; t<0 J_L={jl0:.6} J_R={jr0:.6}"));
    }
    report("A6", pass, &details.join("; "));
}

#[test]
fn a7_active_thermalization() {
    let mut pass = true;
    let mut details = Vec::new();
    for (tl, tr) in [(0.2, 0.4), (0.4, 0.2)] {
        let spec = diamond_preset(DiamondMode::Avoid, 0.5, tl, tr).unwrap();
        let (l, rho) = steady_unique(&spec);
        let (jl, jr) = group(&spec, &l, &rho);
        pass &= if tl < tr { jl.abs() > jr.abs() } else { jr.abs() > jl.abs() };
        details.push(format!("T=({tl},{tr}): |J_L|={:.6} |J_R|={:.6}", jl.abs(), jr.abs()));
    }
    report("A7", pass, &details.join("; "));
}

#[test]
fn a8_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(0x5eeda8);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let d = if case % 2 == 0 { 3 } else { 4 };
        let spec = common::random_spec(&mut rng, d);
        let rho0 = common::random_state(&mut rng, d);
        let protocol = RunProtocol {
            t_max: 10.0,
            sample_interval: 1.0,
            pre_window: 0.0,
            steady_eps: 0.0,
            initial_state: InitialState::Explicit(rho0.clone()),
            ..RunProtocol::default()
        };
        let tr = evolve(&spec, &protocol).unwrap();
        let l = Liouvillian::new(&spec);
        for t in [1.0, 10.0] {
            let sample = tr.samples.iter().find(|s| s.time == t).unwrap();
            let exact = propagate_exact(&l, &rho0, t).unwrap();
            worst = worst.max(common::max_diff(sample.state.matrix(), exact.matrix()));
        }
    }
    report("A8", worst < 1e-7, &format!("20 random specs, max |evolve − exp(Lt)| = {worst:.2e}"));
}

#[test]
fn a9_conservation_and_gauge() {
    let mut worst_cont: f64 = 0.0;
    let mut worst_gauge: f64 = 0.0;
    for (_, tr) in figure_runs() {
        let spec = &tr.spec;
        let l = Liouvillian::new(spec);
        let shifted = spec.shifted(5.0);
        let ls = Liouvillian::new(&shifted);
        let l_undriven = Liouvillian::new(&spec.undriven());
        for s in &tr.samples {
            let generator = if s.time < 0.0 { &l_undriven } else { &l };
            let drho = generator.apply_rhs(&s.state).unwrap();
            let de = common::energy_rate(spec, &drho);
            worst_cont = worst_cont.max((de - s.energetics.power_total - s.energetics.current_total).abs());
        }
        for s in &tr.samples {
            let p0 = power(spec, &s.state).total;
            let p1 = power(&shifted, &s.state).total;
            worst_gauge = worst_gauge.max((p0 - p1).abs());
            let j0 = heat_currents(spec, &l, &s.state).by_transition;
            let j1 = heat_currents(&shifted, &ls, &s.state).by_transition;
            for (a, b) in j0.iter().zip(&j1) {
                worst_gauge = worst_gauge.max((a - b).abs());
            }
        }
    }
    report(
        "A9",
        worst_cont < 1e-8 && worst_gauge < 1e-12,
        &format!(
            "{} trajectories: max |dE/dt − (P+J)| = {worst_cont:.1e}, max gauge shift in P/J_ij = {worst_gauge:.1e}",
            figure_runs().len()
        ),
    );
}

#[test]
fn a10_equilibrium_fixed_point() {
    let mut pass = true;
    let mut details = Vec::new();
    let cases: Vec<(String, SystemSpec, f64)> = vec![
        ("Λ T=0.1".into(), lambda_preset(0.0, 0.1).unwrap(), 0.1),
        ("Λ T=0.5".into(), lambda_preset(0.0, 0.5).unwrap(), 0.5),
        ("V T=0".into(), v_preset(0.0, 0.0).unwrap(), 0.0),
        ("V T=0.3".into(), v_preset(0.0, 0.3).unwrap(), 0.3),
        ("◇ avoid T=0.5".into(), diamond_preset(DiamondMode::Avoid, 0.0, 0.5, 0.5).unwrap(), 0.5),
        ("◇ seek T=0.5".into(), diamond_preset(DiamondMode::Seek, 0.0, 0.5, 0.5).unwrap(), 0.5),
        ("◇ T=0.2".into(), diamond_preset(DiamondMode::Seek, 0.0, 0.2, 0.2).unwrap(), 0.2),
    ];
    for (name, spec, t) in cases {
        let l = Liouvillian::new(&spec);
        let s = steady_states(&l).unwrap();
        let gibbs = gibbs_state(&spec, t).unwrap();
        let residual = l.apply_rhs(&gibbs).unwrap().max_abs();
        let max_gamma = (0..spec.transitions().len()).map(|k| gamma(&spec, k, &gibbs).abs()).fold(0.0, f64::max);
        let agree = s.null_dimension == 1 && common::max_diff(s.states[0].matrix(), gibbs.matrix()) < 1e-10;
        let ok = agree && residual < 1e-10 && max_gamma < 1e-10;
        pass &= ok;
        details.push(format!("{name}: dim={} residual={residual:.1e} max|Γ|={max_gamma:.1e}", s.null_dimension));
    }
    let dark = steady_states(&Liouvillian::new(&lambda_preset(0.0, 0.0).unwrap())).unwrap();
    pass &= dark.null_dimension == 4;
    details.push(format!("Λ T=0 Ω=0: dim={}", dark.null_dimension));
    report("A10", pass, &details.join("; "));
}
