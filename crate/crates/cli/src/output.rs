//! CSV trajectories, run summaries and steady-state reports.

use std::fmt::Write as _;
use std::io::{self, Write};

use qdrive_core::energetics::{gamma, heat_currents, power};
use qdrive_core::{
    DensityMatrix, InitialState, Liouvillian, RunProtocol, SteadyResult, SystemSpec, Termination, Trajectory,
};
use serde_json::{json, Map, Value};

use crate::schema::SpecDoc;

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::ReachedTMax => "reached_t_max",
        Termination::SteadyDetected => "steady_detected",
    }
}

fn initial_state_name(s: &InitialState) -> &'static str {
    match s {
        InitialState::Gibbs => "gibbs",
        InitialState::UndrivenSteady => "undriven_steady",
        InitialState::Explicit(_) => "explicit",
    }
}

/// Sample times are multiples of the interval; rounding strips the
/// floating-point residue so that `0.30000000000000004` prints as `0.3`.
fn format_time(t: f64) -> String {
    let r = (t * 1e9).round() / 1e9;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}

pub fn csv_header(spec: &SystemSpec) -> Vec<String> {
    let labels: Vec<&str> = spec.levels().iter().map(|l| l.label.as_str()).collect();
    let mut cols = vec!["t".to_string()];
    cols.extend(labels.iter().map(|l| format!("p_{l}")));
    for (u, l) in spec.coupled_pairs() {
        cols.push(format!("re_rho_{}{}", labels[u], labels[l]));
        cols.push(format!("im_rho_{}{}", labels[u], labels[l]));
    }
    cols.push("P".into());
    cols.extend((0..spec.transitions().len()).map(|k| format!("J_{}", spec.transition_name(k))));
    cols.push("J_total".into());
    if let Some(groups) = spec.bath_groups() {
        cols.extend(groups.keys().map(|g| format!("J_{g}")));
    }
    cols.extend(["E", "W", "Q"].map(String::from));
    cols
}

pub fn protocol_line(p: &RunProtocol) -> String {
    format!(
        "t_max={} sample_interval={} pre_window={} rtol={:e} atol={:e} steady_eps={:e} initial_state={}",
        p.t_max,
        p.sample_interval,
        p.pre_window,
        p.rtol,
        p.atol,
        p.steady_eps,
        initial_state_name(&p.initial_state)
    )
}

pub fn write_csv(out: &mut impl Write, tr: &Trajectory) -> io::Result<()> {
    let spec = &tr.spec;
    let system = serde_json::to_string(&SpecDoc::from_spec(spec)).expect("spec documents always serialize");
    writeln!(out, "# qdrive {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# system: {system}")?;
    writeln!(out, "# protocol: {}", protocol_line(&tr.protocol))?;
    writeln!(out, "# termination: {} t_end={}", termination_name(tr.termination), format_time(tr.last().time))?;
    writeln!(out, "{}", csv_header(spec).join(","))?;

    let pairs = spec.coupled_pairs();
    let mut row = String::new();
    for s in &tr.samples {
        let e = &s.energetics;
        row.clear();
        row.push_str(&format_time(s.time));
        let mut push = |v: f64| {
            let _ = write!(row, ",{v:e}");
        };
        for p in s.state.populations() {
            push(p);
        }
        for &(u, l) in &pairs {
            let z = s.state.get(u, l);
            push(z.re);
            push(z.im);
        }
        push(e.power_total);
        for &j in &e.current_by_transition {
            push(j);
        }
        push(e.current_total);
        if let Some(groups) = &e.group_currents {
            for &j in groups.values() {
                push(j);
            }
        }
        push(e.energy);
        push(e.work_accum);
        push(e.heat_accum_total);
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn resolved_parameters(spec: &SystemSpec, protocol: &RunProtocol) -> String {
    let mut s = String::new();
    for d in spec.drives() {
        let _ = write!(s, "rabi_{}{}={} ", d.upper, d.lower, d.rabi);
    }
    for (k, t) in spec.transitions().iter().enumerate() {
        let _ = write!(s, "T_{}={} ", spec.transition_name(k), t.temperature);
    }
    let _ = write!(s, "t_max={} rtol={:e}", protocol.t_max, protocol.rtol);
    s
}

/// One-line run summary: final-state power and currents, termination reason
/// and the resolved parameters. `extra_unit` adds P in units of a second
/// reference gap, given as (name, gap).
pub fn summary(name: &str, tr: &Trajectory, extra_unit: Option<(&str, f64)>) -> String {
    let last = tr.last();
    let e = &last.energetics;
    let mut s =
        format!("{name}: {} at t={} P={:.6e}", termination_name(tr.termination), format_time(last.time), e.power_total);
    if let Some((unit, gap)) = extra_unit {
        let _ = write!(s, " P/E_{unit}={:.6e}", e.power_total / gap);
    }
    let _ = write!(s, " |J|={:.6e}", e.current_total.abs());
    for (k, j) in e.current_by_transition.iter().enumerate() {
        let _ = write!(s, " J_{}={j:.6e}", tr.spec.transition_name(k));
    }
    if let Some(groups) = &e.group_currents {
        for (g, j) in groups {
            let _ = write!(s, " J_{g}={j:.6e}");
        }
    }
    let _ = write!(s, " | {}", resolved_parameters(&tr.spec, &tr.protocol));
    s
}

fn flows(spec: &SystemSpec, l: &Liouvillian, rho: &DensityMatrix) -> Value {
    let p = power(spec, rho);
    let j = heat_currents(spec, l, rho);
    let drives: Map<String, Value> =
        spec.drives().iter().zip(&p.by_drive).map(|(d, v)| (format!("{}{}", d.upper, d.lower), json!(v))).collect();
    let names = |k| spec.transition_name(k);
    let currents: Map<String, Value> = j.by_transition.iter().enumerate().map(|(k, v)| (names(k), json!(v))).collect();
    let gammas: Map<String, Value> =
        (0..spec.transitions().len()).map(|k| (names(k), json!(gamma(spec, k, rho)))).collect();
    json!({
        "power": p.total,
        "power_by_drive": drives,
        "currents": currents,
        "current_total": j.total,
        "group_currents": j.by_group,
        "gamma": gammas,
    })
}

fn state_json(spec: &SystemSpec, rho: &DensityMatrix) -> Value {
    let d = spec.dim();
    let part = |f: fn(f64, f64) -> f64| -> Vec<Vec<f64>> {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let z = rho.get(i, j);
                        f(z.re, z.im)
                    })
                    .collect()
            })
            .collect()
    };
    let pops: Map<String, Value> =
        spec.levels().iter().zip(rho.populations()).map(|(l, p)| (l.label.clone(), json!(p))).collect();
    json!({ "populations": pops, "re": part(|re, _| re), "im": part(|_, im| im) })
}

pub fn steady_json(spec: &SystemSpec, l: &Liouvillian, result: &SteadyResult) -> Value {
    let labels: Vec<&str> = spec.levels().iter().map(|l| l.label.as_str()).collect();
    let mut out = json!({
        "levels": labels,
        "null_dimension": result.null_dimension,
        "unique": result.unique().is_some(),
        "states": result.states.iter().map(|s| state_json(spec, s)).collect::<Vec<_>>(),
        "residuals": result.residuals,
    });
    if let Some(rho) = result.unique() {
        if let (Value::Object(o), Value::Object(f)) = (&mut out, flows(spec, l, rho)) {
            o.extend(f);
        }
    }
    out
}

/// Six-decimal value without a sign on rounded-away noise.
fn fixed(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn state_text(out: &mut String, spec: &SystemSpec, rho: &DensityMatrix) {
    let labels: Vec<&str> = spec.levels().iter().map(|l| l.label.as_str()).collect();
    for (i, li) in labels.iter().enumerate() {
        let _ = writeln!(out, "  rho_{li}{li} = {}", fixed(rho.population(i)));
    }
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            let z = rho.get(i, j);
            if i != j && spec.energies()[i] >= spec.energies()[j] && z.norm() > 1e-12 {
                let im = fixed(z.im);
                let (sign, im) = match im.strip_prefix('-') {
                    Some(abs) => ('-', abs.to_string()),
                    None => ('+', im),
                };
                let _ = writeln!(out, "  rho_{}{} = {} {sign} {im}i", labels[i], labels[j], fixed(z.re));
            }
        }
    }
}

pub fn steady_text(spec: &SystemSpec, l: &Liouvillian, result: &SteadyResult) -> String {
    let mut out = format!("null dimension: {}\n", result.null_dimension);
    let Some(rho) = result.unique() else {
        let _ = writeln!(
            out,
            "steady state is not unique; the long-time state depends on the initial state (supply one explicitly)"
        );
        for (k, s) in result.states.iter().enumerate() {
            let _ = writeln!(out, "asymptotic state {}:", k + 1);
            state_text(&mut out, spec, s);
        }
        return out;
    };
    let _ = writeln!(out, "steady state:");
    state_text(&mut out, spec, rho);
    let p = power(spec, rho);
    let j = heat_currents(spec, l, rho);
    let _ = writeln!(out, "P = {:.6e}", p.total);
    for (d, v) in spec.drives().iter().zip(&p.by_drive) {
        let _ = writeln!(out, "P_{}{} = {v:.6e}", d.upper, d.lower);
    }
    for (k, v) in j.by_transition.iter().enumerate() {
        let name = spec.transition_name(k);
        let _ = writeln!(out, "J_{name} = {v:.6e}  Gamma_{name} = {:.6e}", gamma(spec, k, rho));
    }
    let _ = writeln!(out, "J_total = {:.6e}", j.total);
    if let Some(groups) = j.by_group {
        for (g, v) in groups {
            let _ = writeln!(out, "J_{g} = {v:.6e}");
        }
    }
    out
}
