//! Stationary states from the null space of the generator, thermal states,
//! and closed-form stationary results for the Λ and V presets.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::Trajectory;
use crate::linalg::{self, abs, CMatrix, C64};
use crate::liouvillian::{DensityMatrix, Liouvillian};
use crate::model::SystemSpec;
use crate::{Error, Result};

/// Relative singular-value threshold defining the numerical null space.
pub const NULL_SPACE_RTOL: f64 = 1e-10;

/// Steady states of a generator.
#[derive(Debug, Clone)]
pub struct SteadyResult {
    /// The unique steady state when `null_dimension == 1`; otherwise a
    /// linearly independent set of admissible steady states spanning the
    /// null space.
    pub states: Vec<DensityMatrix>,
    pub null_dimension: usize,
    /// max |L vec ρ| per state.
    pub residuals: Vec<f64>,
}

impl SteadyResult {
    pub fn unique(&self) -> Option<&DensityMatrix> {
        (self.null_dimension == 1).then(|| &self.states[0])
    }
}

/// Solves L vec ρ = 0.
///
/// A one-dimensional null space is normalized to unit trace directly. A
/// degenerate null space is resolved through the spectral projector onto the
/// zero eigenvalue, P₀ = R (Lₗ† R)⁻¹ Lₗ† built from right and left null
/// vectors: P₀ maps every state to the state it relaxes to, so the images of
/// a tomographically complete set of pure probes are admissible steady
/// states that span the null space.
pub fn steady_states(liouvillian: &Liouvillian) -> Result<SteadyResult> {
    let d = liouvillian.dim();
    let l = liouvillian.matrix();
    let (right, _) = linalg::null_space(l, NULL_SPACE_RTOL);
    let k = right.ncols();
    if k == 0 {
        return Err(Error::Internal("generator has no null space".into()));
    }

    let states = if k == 1 {
        let m = CMatrix::unvectorize(&right.column(0), d);
        let tr = m.trace();
        if tr.norm() < 1e-8 {
            return Err(Error::Internal("null vector has vanishing trace".into()));
        }
        vec![physical(m.scale(tr.inv()))?]
    } else {
        degenerate_states(l, &right, d)?
    };

    let residuals =
        states.iter().map(|s| CMatrix::unvectorize(&l.mat_vec(&s.matrix().vectorize()), d).max_abs()).collect();
    Ok(SteadyResult { states, null_dimension: k, residuals })
}

fn physical(m: CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::with_tolerances(m.hermitian_part(), 1e-12, 1e-10, 1e-9)
        .map_err(|e| Error::Internal(format!("steady state is not physical: {e}")))
}

fn degenerate_states(l: &CMatrix, right: &CMatrix, d: usize) -> Result<Vec<DensityMatrix>> {
    let k = right.ncols();
    let (left, _) = linalg::null_space(&l.adjoint(), NULL_SPACE_RTOL);
    if left.ncols() != k {
        return Err(Error::Internal(format!("left/right null dimensions differ ({} vs {k})", left.ncols())));
    }
    let overlap = &left.adjoint() * right;
    let inv = linalg::solve(&overlap, &CMatrix::identity(k))
        .ok_or_else(|| Error::Internal("zero eigenvalue is not semisimple".into()))?;
    let projector = &(right * &inv) * &left.adjoint();

    let mut chosen: Vec<DensityMatrix> = Vec::with_capacity(k);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k);
    for probe in probes(d) {
        if chosen.len() == k {
            break;
        }
        let image = CMatrix::unvectorize(&projector.mat_vec(&probe.vectorize()), d).hermitian_part();
        let mut residual = image.vectorize();
        for b in &basis {
            let c: C64 = b.iter().zip(&residual).map(|(x, y)| x.conj() * y).sum();
            for (r, x) in residual.iter_mut().zip(b) {
                *r -= c * x;
            }
        }
        let norm = libm::sqrt(residual.iter().map(|z| z.norm_sqr()).sum());
        if norm < 1e-8 {
            continue;
        }
        basis.push(residual.iter().map(|z| z / norm).collect());
        chosen.push(physical(image)?);
    }
    if chosen.len() != k {
        return Err(Error::Internal(format!("found {} of {k} independent steady states", chosen.len())));
    }
    Ok(chosen)
}

// |i⟩⟨i|, then (|i⟩+|j⟩)/√2 and (|i⟩+i|j⟩)/√2 projectors.
fn probes(d: usize) -> impl Iterator<Item = CMatrix> {
    let diag = (0..d).map(move |i| DensityMatrix::pure(d, i).into_matrix());
    let pairs = (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i, j)));
    let coherent = pairs.flat_map(move |(i, j)| {
        [C64::new(1.0, 0.0), C64::new(0.0, 1.0)].into_iter().map(move |phase| {
            let mut m = CMatrix::zeros(d, d);
            m[(i, i)] = C64::new(0.5, 0.0);
            m[(j, j)] = C64::new(0.5, 0.0);
            m[(i, j)] = phase.conj() * 0.5;
            m[(j, i)] = phase * 0.5;
            m
        })
    });
    diag.chain(coherent)
}

/// Thermal state ρ ∝ exp(−H_S/T). At T = 0 the projector onto the lowest
/// level, which must be non-degenerate.
pub fn gibbs_state(spec: &SystemSpec, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
    }
    let energies = spec.energies();
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    if temperature == 0.0 {
        let ground: Vec<usize> = (0..energies.len()).filter(|&i| energies[i] == e_min).collect();
        if ground.len() > 1 {
            return Err(Error::Domain("lowest level is degenerate; zero-temperature state is ambiguous".into()));
        }
        return Ok(DensityMatrix::pure(spec.dim(), ground[0]));
    }
    let weights: Vec<f64> = energies.iter().map(|&e| libm::exp(-(e - e_min) / temperature)).collect();
    let z: f64 = weights.iter().sum();
    let pops: Vec<f64> = weights.iter().map(|w| w / z).collect();
    Ok(DensityMatrix::from_checked(CMatrix::from_diagonal(&pops)))
}

/// Stationary absorbed power of the driven Λ system, in units of E_ea κ
/// with κ = 1:
///
/// P = 4Ω²n_eb / {4Ω² + 2(1 + 6Ω²)n_eb + n_eb² + 2n_ea²(1 + 3n_eb) + n_ea(2 + 3n_eb(3 + n_eb))}
pub fn lambda_power_closed_form(omega: f64, n_ea: f64, n_eb: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("closed form requires omega > 0, got {omega}")));
    }
    if !(n_ea >= 0.0 && n_eb >= 0.0) {
        return Err(Error::Domain("occupancies must be >= 0".into()));
    }
    let w2 = omega * omega;
    let denom = 4.0 * w2
        + 2.0 * (1.0 + 6.0 * w2) * n_eb
        + n_eb * n_eb
        + 2.0 * n_ea * n_ea * (1.0 + 3.0 * n_eb)
        + n_ea * (2.0 + 3.0 * n_eb * (3.0 + n_eb));
    Ok(4.0 * w2 * n_eb / denom)
}

/// Second-order low-temperature expansion of [`lambda_power_closed_form`]:
/// n_eb − (3 + 1/(2Ω²))n_eb² − n_ea n_eb/(2Ω²).
pub fn lambda_power_low_temperature(omega: f64, n_ea: f64, n_eb: f64) -> f64 {
    let inv = 1.0 / (2.0 * omega * omega);
    n_eb - (3.0 + inv) * n_eb * n_eb - inv * n_ea * n_eb
}

/// Zero-temperature stationary values of the driven V system (κ = 1,
/// E_ag = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VClosedForm {
    pub rho_aa: f64,
    pub rho_ag: C64,
    pub power: f64,
}

pub fn v_steady_closed_form(omega: f64) -> VClosedForm {
    let w2 = omega * omega;
    let denom = 1.0 + 8.0 * w2;
    VClosedForm { rho_aa: 4.0 * w2 / denom, rho_ag: C64::new(0.0, -2.0 * omega / denom), power: 4.0 * w2 / denom }
}

/// Residuals of the zero-temperature Λ work and heat relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkHeatCheck {
    pub rho_bb: f64,
    pub work: f64,
    pub heat: f64,
    /// |ρ_bb − W/(2E_ea)|
    pub w_check: f64,
    /// |ρ_bb − |Q|/(2E_ea − E_ba)|, from ΔE = W + Q with E(0) = E_a.
    pub q_check: f64,
    /// |ρ_bb − (|Q| + E_a)/(2E_ea − E_ba)| with the system's absolute E_a;
    /// identical to `q_check` when E_a = 0.
    pub q_check_absolute: f64,
}

/// Checks ρ_bb(∞) = W/(2E_ea) and ρ_bb(∞) = |Q|/(2E_ea − E_ba) on a
/// zero-temperature Λ trajectory started in |a⟩⟨a|.
pub fn lambda_work_heat_relations(trajectory: &Trajectory) -> Result<WorkHeatCheck> {
    let spec = &trajectory.spec;
    let idx = |l: &str| {
        spec.level_index(l).ok_or_else(|| Error::Usage(format!("trajectory is not a Λ system (no level {l:?})")))
    };
    let (a, b, e) = (idx("a")?, idx("b")?, idx("e")?);
    if spec.dim() != 3 || spec.transitions().iter().any(|t| t.temperature != 0.0) {
        return Err(Error::Usage("work/heat relations need the three-level Λ system at T = 0".into()));
    }
    let start = trajectory
        .samples
        .iter()
        .find(|s| s.time >= 0.0)
        .ok_or_else(|| Error::Usage("trajectory has no t >= 0 samples".into()))?;
    if abs(start.state.population(a) - 1.0) > 1e-12 {
        return Err(Error::Usage("work/heat relations need the initial state |a⟩⟨a|".into()));
    }
    let last = trajectory.samples.last().expect("non-empty");
    let en = spec.energies();
    let (e_ea, e_ba) = (en[e] - en[a], en[b] - en[a]);
    let rho_bb = last.state.population(b);
    let work = last.energetics.work_accum;
    let heat = last.energetics.heat_accum_total;
    Ok(WorkHeatCheck {
        rho_bb,
        work,
        heat,
        w_check: abs(rho_bb - work / (2.0 * e_ea)),
        q_check: abs(rho_bb - abs(heat) / (2.0 * e_ea - e_ba)),
        q_check_absolute: abs(rho_bb - (abs(heat) + en[a]) / (2.0 * e_ea - e_ba)),
    })
}
