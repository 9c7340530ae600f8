//! Energy bookkeeping: absorbed power, heat currents, detailed-balance
//! violation and system energy.
//!
//! With E = Tr(H_S ρ), the continuity equation dE/dt = P + J splits the
//! energy change into the unitary part P = Tr(H_S(−i)[H_L, ρ]) supplied by
//! the drives and the dissipative parts J_ij = Tr(H_S 𝓛_ij(ρ)) exchanged
//! with the bath of each transition. J_ij > 0 means heat flows into the
//! system.
//!
//! Heat currents are always read off the same generator slices the
//! integrator uses.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{CMatrix, C64};
use crate::liouvillian::{build_hamiltonians, DensityMatrix, Liouvillian};
use crate::model::SystemSpec;

impl AsRef<CMatrix> for DensityMatrix {
    fn as_ref(&self) -> &CMatrix {
        self.matrix()
    }
}

impl AsRef<CMatrix> for CMatrix {
    fn as_ref(&self) -> &CMatrix {
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Power {
    pub total: f64,
    /// P_ij per drive, in spec order.
    pub by_drive: Vec<f64>,
}

/// Absorbed power, summed from the per-drive terms
/// P_ij = E_ij Ω · i(ρ_ij − ρ_ji).
pub fn power(spec: &SystemSpec, rho: &impl AsRef<CMatrix>) -> Power {
    let rho = rho.as_ref();
    let by_drive: Vec<f64> = spec
        .drives()
        .iter()
        .enumerate()
        .map(|(k, drive)| {
            let (i, j) = spec.drive_levels(k);
            let gap = spec.levels()[i].energy - spec.levels()[j].energy;
            // i(ρ_ij − ρ_ji) = −2 Im ρ_ij for Hermitian ρ
            let coherence = C64::new(0.0, 1.0) * (rho[(i, j)] - rho[(j, i)]);
            gap * drive.rabi * coherence.re
        })
        .collect();
    Power { total: by_drive.iter().sum(), by_drive }
}

/// Absorbed power from the trace form Tr(H_S (−i)[H_L, ρ]).
pub fn power_trace_form(spec: &SystemSpec, rho: &impl AsRef<CMatrix>) -> f64 {
    let rho = rho.as_ref();
    let (h_s, h_l) = build_hamiltonians(spec);
    let comm = &(&h_l * rho) - &(rho * &h_l);
    let p = (&h_s * &comm).trace() * C64::new(0.0, -1.0);
    debug_assert!(p.im.abs() < 1e-12 * (1.0 + p.re.abs()) || rho.hermiticity_defect() > 1e-12);
    p.re
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatCurrents {
    /// J_ij per transition, in spec order.
    pub by_transition: Vec<f64>,
    pub total: f64,
    /// Σ J over each bath group; `None` when the spec defines no groups.
    pub by_group: Option<BTreeMap<String, f64>>,
}

/// J_ij = Tr(H_S 𝓛_ij(ρ)) for every transition.
pub fn heat_currents(spec: &SystemSpec, liouvillian: &Liouvillian, rho: &impl AsRef<CMatrix>) -> HeatCurrents {
    let rho = rho.as_ref();
    let energies = spec.energies();
    let v = rho.vectorize();
    let by_transition: Vec<f64> =
        liouvillian.dissipators().iter().map(|slice| energy_rate(slice, &v, &energies)).collect();
    let total = by_transition.iter().sum();
    let by_group = group_sums(spec, &by_transition);
    HeatCurrents { by_transition, total, by_group }
}

// Tr(H_S unvec(S v)) touching only the diagonal rows of S.
fn energy_rate(slice: &CMatrix, v: &[C64], energies: &[f64]) -> f64 {
    let d = energies.len();
    let row_len = slice.ncols();
    let data = slice.as_slice();
    energies
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let r = i * d + i;
            let row = &data[r * row_len..(r + 1) * row_len];
            e * row.iter().zip(v).map(|(a, b)| a * b).sum::<C64>().re
        })
        .sum()
}

/// Per-group sums of a per-transition quantity.
pub fn group_sums(spec: &SystemSpec, per_transition: &[f64]) -> Option<BTreeMap<String, f64>> {
    spec.bath_groups().map(|groups| {
        groups.iter().map(|(name, members)| (name.clone(), members.iter().map(|&k| per_transition[k]).sum())).collect()
    })
}

/// Broken-detailed-balance measure Γ_ij = κ[(1+n)ρ_ii − nρ_jj] of
/// transition `k`.
pub fn gamma(spec: &SystemSpec, k: usize, rho: &impl AsRef<CMatrix>) -> f64 {
    let rho = rho.as_ref();
    let (i, j) = spec.transition_levels(k);
    let n = spec.occupancy(k);
    spec.transitions()[k].kappa * ((1.0 + n) * rho[(i, i)].re - n * rho[(j, j)].re)
}

/// E = Tr(H_S ρ).
pub fn energy(spec: &SystemSpec, rho: &impl AsRef<CMatrix>) -> f64 {
    let rho = rho.as_ref();
    spec.levels().iter().enumerate().map(|(i, l)| l.energy * rho[(i, i)].re).sum()
}

/// Rebuilds ∂ρ_nn/∂t for every level from power and heat flows:
///
/// ∂ρ_nn = Σ_{j<n} (P_nj + J_nj)/E_nj − Σ_{i>n} (P_in + J_in)/E_in
pub fn population_balance(spec: &SystemSpec, power_by_drive: &[f64], current_by_transition: &[f64]) -> Vec<f64> {
    let energies = spec.energies();
    let mut rates = vec![0.0; spec.dim()];
    let mut add = |a: usize, b: usize, flow: f64| {
        let (hi, lo) = if energies[a] > energies[b] { (a, b) } else { (b, a) };
        let rate = flow / (energies[hi] - energies[lo]);
        rates[hi] += rate;
        rates[lo] -= rate;
    };
    for (k, &p) in power_by_drive.iter().enumerate() {
        let (u, l) = spec.drive_levels(k);
        add(u, l, p);
    }
    for (k, &j) in current_by_transition.iter().enumerate() {
        let (u, l) = spec.transition_levels(k);
        add(u, l, j);
    }
    rates
}

/// All energy observables at one instant of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergeticsSample {
    pub time: f64,
    pub power_total: f64,
    pub power_by_drive: Vec<f64>,
    pub current_by_transition: Vec<f64>,
    pub gamma_by_transition: Vec<f64>,
    pub current_total: f64,
    pub group_currents: Option<BTreeMap<String, f64>>,
    pub energy: f64,
    pub work_accum: f64,
    pub heat_accum_total: f64,
    pub heat_accum_by_transition: Vec<f64>,
}

impl EnergeticsSample {
    /// Evaluates every observable for `rho`; `work` and `heat` are the
    /// accumulated W and per-transition Q carried by the integrator.
    pub fn evaluate(
        spec: &SystemSpec,
        liouvillian: &Liouvillian,
        rho: &impl AsRef<CMatrix>,
        time: f64,
        work: f64,
        heat: &[f64],
    ) -> Self {
        let rho = rho.as_ref();
        let p = power(spec, rho);
        let j = heat_currents(spec, liouvillian, rho);
        let gamma_by_transition = (0..spec.transitions().len()).map(|k| gamma(spec, k, rho)).collect();
        Self {
            time,
            power_total: p.total,
            power_by_drive: p.by_drive,
            current_by_transition: j.by_transition,
            gamma_by_transition,
            current_total: j.total,
            group_currents: j.by_group,
            energy: energy(spec, rho),
            work_accum: work,
            heat_accum_total: heat.iter().sum(),
            heat_accum_by_transition: heat.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::abs;
    use crate::model::{diamond_preset, lambda_preset, DiamondMode};

    #[test]
    fn diagonal_state_absorbs_nothing() {
        let spec = lambda_preset(0.5, 0.1).unwrap();
        let rho = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(power(&spec, &rho).total, 0.0);
        assert_eq!(power_trace_form(&spec, &rho), 0.0);
    }

    #[test]
    fn excited_lambda_emits_into_both_channels() {
        let spec = lambda_preset(0.5, 0.0).unwrap();
        let l = Liouvillian::new(&spec);
        let j = heat_currents(&spec, &l, &DensityMatrix::pure(3, 2));
        assert!(abs(j.by_transition[0] + 1.0) < 1e-15);
        assert!(abs(j.by_transition[1] + 0.99) < 1e-15);
        assert!(j.by_group.is_none());
    }

    #[test]
    fn gamma_zero_temperature_and_energy() {
        let spec = lambda_preset(0.5, 0.0).unwrap();
        let rho = DensityMatrix::diagonal(&[0.25, 0.35, 0.4]).unwrap();
        assert_eq!(gamma(&spec, 0, &rho), 0.4);
        assert_eq!(energy(&spec, &DensityMatrix::pure(3, 0)), 0.0);
        assert_eq!(energy(&spec, &DensityMatrix::pure(3, 1)), 0.01);
    }

    #[test]
    fn group_sums_partition_currents() {
        let spec = diamond_preset(DiamondMode::Seek, 0.5, 0.2, 0.4).unwrap();
        let g = group_sums(&spec, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(g["L"], 3.0);
        assert_eq!(g["R"], 12.0);
    }
}
