//! Time evolution with a sudden drive switch-on at t = 0.
//!
//! For t < 0 the system sits in a stationary state of the undriven
//! generator; those samples are emitted over a fixed pre-window without
//! integrating. At t = 0 the driven generator takes over and the augmented
//! state (vec ρ, W, Q per transition) is integrated with an embedded
//! Dormand–Prince 5(4) pair and a PI step-size controller.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::energetics::{self, EnergeticsSample};
use crate::linalg::{self, abs, CMatrix, C64};
use crate::liouvillian::{DensityMatrix, Liouvillian};
use crate::model::SystemSpec;
use crate::steady::{gibbs_state, steady_states};
use crate::{Error, Result};

const TRACE_DRIFT_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-9;
const MAX_STEPS: usize = 20_000_000;

/// How the state at t = 0⁻ is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Thermal state at the single temperature shared by all transitions.
    Gibbs,
    /// Unique steady state of the spec with all drives switched off.
    UndrivenSteady,
    Explicit(DensityMatrix),
}

impl InitialState {
    /// `Gibbs` when every bath has the same temperature, otherwise
    /// `UndrivenSteady`.
    pub fn default_for(spec: &SystemSpec) -> Self {
        match spec.single_temperature() {
            Some(_) => Self::Gibbs,
            None => Self::UndrivenSteady,
        }
    }
}

/// Run parameters. Times in 1/κ.
#[derive(Debug, Clone, PartialEq)]
pub struct RunProtocol {
    /// Length of the undriven t < 0 segment that is reported.
    pub pre_window: f64,
    pub t_max: f64,
    pub sample_interval: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Stop once max |dρ/dt| at a sample falls below this.
    pub steady_eps: f64,
    pub initial_state: InitialState,
}

impl Default for RunProtocol {
    fn default() -> Self {
        Self {
            pre_window: 2.0,
            t_max: 1000.0,
            sample_interval: 0.1,
            rtol: 1e-8,
            atol: 1e-10,
            steady_eps: 1e-10,
            initial_state: InitialState::Gibbs,
        }
    }
}

impl RunProtocol {
    pub fn validate(&self) -> Result<()> {
        let usage = |m: &str| Err(Error::Usage(m.into()));
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return usage("t_max must be positive");
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return usage("sample_interval must be positive");
        }
        if !(self.pre_window >= 0.0 && self.pre_window.is_finite()) {
            return usage("pre_window must be >= 0");
        }
        for (name, tol) in [("rtol", self.rtol), ("atol", self.atol)] {
            if !(tol > 0.0 && tol < 1e-2) {
                return Err(Error::Usage(format!("{name} must lie in (0, 1e-2), got {tol}")));
            }
        }
        if !(self.steady_eps >= 0.0) {
            return usage("steady_eps must be >= 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedTMax,
    SteadyDetected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub state: DensityMatrix,
    pub energetics: EnergeticsSample,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub spec: SystemSpec,
    pub protocol: RunProtocol,
    pub samples: Vec<Sample>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories always hold the t = 0 sample")
    }
}

/// Resolves the protocol's initial state for `spec`.
pub fn initial_state(spec: &SystemSpec, protocol: &RunProtocol) -> Result<DensityMatrix> {
    match &protocol.initial_state {
        InitialState::Gibbs => match spec.single_temperature() {
            Some(t) => gibbs_state(spec, t),
            None if spec.transitions().is_empty() => {
                Err(Error::Usage("Gibbs initial state needs at least one bath".into()))
            }
            None => Err(Error::Usage(
                "baths have different temperatures; use the undriven steady state as initial state".into(),
            )),
        },
        InitialState::UndrivenSteady => {
            let result = steady_states(&Liouvillian::new(&spec.undriven()))?;
            match result.unique() {
                Some(rho) => Ok(rho.clone()),
                None => Err(Error::DegenerateSteadyState { dimension: result.null_dimension }),
            }
        }
        InitialState::Explicit(rho) => {
            if rho.dim() != spec.dim() {
                return Err(Error::Usage(format!(
                    "explicit initial state is {0}x{0}, system has {1} levels",
                    rho.dim(),
                    spec.dim()
                )));
            }
            Ok(rho.clone())
        }
    }
}

/// ρ(t) = unvec(exp(L t) vec ρ₀) by matrix exponential.
pub fn propagate_exact(liouvillian: &Liouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("propagation time must be >= 0, got {t}")));
    }
    if rho0.dim() != liouvillian.dim() {
        return Err(Error::Usage("state and generator dimensions differ".into()));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let prop = linalg::expm(&liouvillian.matrix().scale_real(t));
    let m = CMatrix::unvectorize(&prop.mat_vec(&rho0.matrix().vectorize()), rho0.dim());
    DensityMatrix::with_tolerances(m, 1e-10, 1e-10, POSITIVITY_TOL)
}

/// Integrates the driven system from the protocol's initial state.
pub fn evolve(spec: &SystemSpec, protocol: &RunProtocol) -> Result<Trajectory> {
    protocol.validate()?;
    let undriven = Liouvillian::new(&spec.undriven());
    let driven = Liouvillian::new(spec);
    let rho0 = initial_state(spec, protocol)?;
    let m = spec.transitions().len();
    let interval = protocol.sample_interval;

    let mut samples = Vec::new();
    let pre = libm::round(protocol.pre_window / interval) as i64;
    let zeros = vec![0.0; m];
    for k in -pre..0 {
        let t = k as f64 * interval;
        let e = EnergeticsSample::evaluate(spec, &undriven, &rho0, t, 0.0, &zeros);
        samples.push(Sample { time: t, state: rho0.clone(), energetics: e });
    }

    let times = sample_times(protocol.t_max, interval);
    let system = Augmented { spec, liouvillian: &driven };
    let mut y = system.pack(rho0.matrix());
    let mut solver = Dopri5::new(y.len(), protocol.rtol, protocol.atol);
    let mut t = 0.0;
    let mut termination = Termination::ReachedTMax;

    for &target in &times {
        if target > t {
            solver.advance(&system, &mut t, target, &mut y)?;
        }
        let rho = system.state(&y);
        let e = EnergeticsSample::evaluate(spec, &driven, &rho, target, y[system.work_index()], system.heat(&y));
        let rate = driven.apply_to(&rho)?.max_abs();
        samples.push(Sample { time: target, state: DensityMatrix::from_checked(rho), energetics: e });
        if rate < protocol.steady_eps {
            termination = Termination::SteadyDetected;
            break;
        }
    }

    Ok(Trajectory { spec: spec.clone(), protocol: protocol.clone(), samples, termination })
}

fn sample_times(t_max: f64, interval: f64) -> Vec<f64> {
    let n = libm::floor(t_max / interval * (1.0 + 1e-12)) as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * interval).collect();
    if let Some(&last) = times.last() {
        if t_max - last > 1e-9 * interval {
            times.push(t_max);
        } else if let Some(l) = times.last_mut() {
            *l = (*l).min(t_max);
        }
    }
    times
}

/// Real augmented state: [Re vec ρ, Im vec ρ, W, Q_1 … Q_m].
struct Augmented<'a> {
    spec: &'a SystemSpec,
    liouvillian: &'a Liouvillian,
}

impl Augmented<'_> {
    fn n(&self) -> usize {
        let d = self.spec.dim();
        d * d
    }

    fn work_index(&self) -> usize {
        2 * self.n()
    }

    fn heat<'y>(&self, y: &'y [f64]) -> &'y [f64] {
        &y[2 * self.n() + 1..]
    }

    fn pack(&self, rho: &CMatrix) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; 2 * n + 1 + self.spec.transitions().len()];
        for (k, z) in rho.vectorize().into_iter().enumerate() {
            y[k] = z.re;
            y[n + k] = z.im;
        }
        y
    }

    fn vec_rho(&self, y: &[f64]) -> Vec<C64> {
        let n = self.n();
        (0..n).map(|k| C64::new(y[k], y[n + k])).collect()
    }

    fn state(&self, y: &[f64]) -> CMatrix {
        CMatrix::unvectorize(&self.vec_rho(y), self.spec.dim())
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.n();
        let v = self.vec_rho(y);
        let dv = self.liouvillian.matrix().mat_vec(&v);
        for (k, z) in dv.iter().enumerate() {
            dy[k] = z.re;
            dy[n + k] = z.im;
        }
        let rho = CMatrix::unvectorize(&v, self.spec.dim());
        dy[2 * n] = energetics::power(self.spec, &rho).total;
        let j = energetics::heat_currents(self.spec, self.liouvillian, &rho);
        dy[2 * n + 1..].copy_from_slice(&j.by_transition);
    }

    /// Symmetrizes ρ in place and checks trace and positivity.
    fn project(&self, t: f64, y: &mut [f64]) -> Result<()> {
        let n = self.n();
        let d = self.spec.dim();
        let rho = self.state(y).hermitian_part();
        for (k, z) in rho.vectorize().into_iter().enumerate() {
            y[k] = z.re;
            y[n + k] = z.im;
        }
        let drift = abs(rho.trace().re - 1.0);
        if drift > TRACE_DRIFT_TOL {
            return Err(Error::Integration { time: t, reason: format!("trace drifted by {drift:e}") });
        }
        let min = if d <= 1 { 0.0 } else { linalg::min_eigenvalue(&rho) };
        if min < -POSITIVITY_TOL {
            return Err(Error::Integration { time: t, reason: format!("negative eigenvalue {min:e}") });
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau; nodes c = (0, 1/5, 3/10, 4/5, 8/9, 1, 1).
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights minus embedded 4th-order weights
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

struct Dopri5 {
    rtol: f64,
    atol: f64,
    h: f64,
    err_old: f64,
    steps: usize,
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
    y_new: Vec<f64>,
}

impl Dopri5 {
    fn new(dim: usize, rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            h: 1e-3,
            err_old: 1e-4,
            steps: 0,
            k: core::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
            y_new: vec![0.0; dim],
        }
    }

    /// Advances from `*t` to exactly `target`.
    fn advance(&mut self, sys: &Augmented<'_>, t: &mut f64, target: f64, y: &mut Vec<f64>) -> Result<()> {
        sys.rhs(y, &mut self.k[0]);
        while *t < target {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return Err(Error::Integration { time: *t, reason: "step budget exhausted".into() });
            }
            let remaining = target - *t;
            let landing = self.h >= remaining * (1.0 - 1e-12);
            let h = if landing { remaining } else { self.h };
            if h <= 1e-14 * (1.0 + abs(*t)) {
                return Err(Error::Integration { time: *t, reason: format!("step size underflow (h = {h:e})") });
            }

            let err = self.try_step(sys, y, h);
            let fac11 = libm::pow(err, 0.2 - BETA * 0.75);
            if err <= 1.0 {
                let fac = (fac11 / libm::pow(self.err_old, BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                self.err_old = err.max(1e-4);
                *t = if landing { target } else { *t + h };
                core::mem::swap(y, &mut self.y_new);
                sys.project(*t, y)?;
                sys.rhs(y, &mut self.k[0]);
                let proposal = h / fac;
                // a short landing step should not throttle the next one
                self.h = if landing { proposal.max(self.h.min(proposal * FAC_MAX)) } else { proposal };
            } else {
                self.h = h / (fac11 / SAFETY).min(1.0 / FAC_MIN);
            }
        }
        Ok(())
    }

    // One trial step of size h from y with k[0] = f(y); returns the scaled
    // error norm and leaves the 5th-order candidate in y_new. The last
    // tableau row is the solution itself, so k[6] = f(y_new).
    fn try_step(&mut self, sys: &Augmented<'_>, y: &[f64], h: f64) -> f64 {
        for s in 1..7 {
            for i in 0..y.len() {
                let acc: f64 = A[s][..s].iter().zip(&self.k[..s]).map(|(a, k)| a * k[i]).sum();
                self.stage[i] = y[i] + h * acc;
            }
            sys.rhs(&self.stage, &mut self.k[s]);
        }
        self.y_new.copy_from_slice(&self.stage);

        let mut sum = 0.0;
        for i in 0..y.len() {
            let e: f64 = E.iter().zip(&self.k).map(|(w, k)| w * k[i]).sum();
            let scale = self.atol + self.rtol * abs(y[i]).max(abs(self.y_new[i]));
            let r = h * e / scale;
            sum += r * r;
        }
        libm::sqrt(sum / y.len() as f64)
    }
}
