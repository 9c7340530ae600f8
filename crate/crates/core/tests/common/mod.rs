#![allow(dead_code)]

use qdrive_core::linalg::{CMatrix, C64};
use qdrive_core::model::{LevelSpec, SystemSpec, TransitionSpec};
use qdrive_core::{DensityMatrix, DriveSpec};
use rand::rngs::StdRng;
use rand::Rng;

/// Random Hermitian unit-trace matrix (not necessarily positive).
pub fn random_hermitian_unit_trace(rng: &mut StdRng, d: usize) -> CMatrix {
    let mut m = CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m = m.hermitian_part();
    let shift = (C64::new(1.0, 0.0) - m.trace()) / d as f64;
    for i in 0..d {
        m[(i, i)] += shift;
    }
    m
}

/// Random density matrix A A† / Tr(A A†).
pub fn random_state(rng: &mut StdRng, d: usize) -> DensityMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

/// Random 3- or 4-level system: sorted energies, a random set of thermal
/// transitions (κ ∈ [0.1, 2], T ∈ [0, 1]) and one or two drives (Ω ∈ [0, 1]).
pub fn random_spec(rng: &mut StdRng, d: usize) -> SystemSpec {
    let labels = ["g", "a", "b", "e"];
    let mut energy = 0.0;
    let levels: Vec<LevelSpec> = (0..d)
        .map(|i| {
            if i > 0 {
                energy += rng.gen_range(0.2..1.2);
            }
            LevelSpec::new(labels[i], energy)
        })
        .collect();
    let mut transitions = Vec::new();
    for u in 1..d {
        for l in 0..u {
            if l + 1 == u || rng.gen_bool(0.5) {
                let bath = if rng.gen_bool(0.5) { "L" } else { "R" };
                transitions.push(TransitionSpec::new(
                    labels[u],
                    labels[l],
                    rng.gen_range(0.1..2.0),
                    bath,
                    rng.gen_range(0.0..1.0),
                ));
            }
        }
    }
    let mut drives = vec![DriveSpec::new(labels[d - 1], labels[0], rng.gen_range(0.0..1.0))];
    if rng.gen_bool(0.5) {
        drives.push(DriveSpec::new(labels[2], labels[1], rng.gen_range(0.0..1.0)));
    }
    SystemSpec::new(levels, transitions, drives, None).unwrap()
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).max_abs()
}

/// dE/dt = Tr(H_S dρ/dt) from the generator.
pub fn energy_rate(spec: &SystemSpec, drho: &CMatrix) -> f64 {
    spec.levels().iter().enumerate().map(|(i, l)| l.energy * drho[(i, i)].re).sum()
}
