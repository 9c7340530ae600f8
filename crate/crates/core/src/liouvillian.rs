//! Generator of the master equation in the interaction picture.
//!
//! ∂ρ/∂t = −i[H_L, ρ] + Σ_k 𝓛_k(ρ), where each thermal transition i → j
//! contributes
//!
//! 𝓛_ij(ρ) = κ(n+1)·D[σ_ji](ρ) + κn·D[σ_ij](ρ),  D[A]ρ = AρA† − ½{A†A, ρ}
//!
//! with σ_ji = |j⟩⟨i| the lowering operator and n the Bose occupancy at the
//! transition's gap and temperature. The system Hamiltonian H_S does not
//! enter the generator; it is only used by the energetics.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{self, CMatrix, C64};
use crate::model::SystemSpec;
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite d × d matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (smallest eigenvalue ≥ −1e-9).
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerances(m, HERMITIAN_TOL, TRACE_TOL, POSITIVITY_TOL)
    }

    pub(crate) fn with_tolerances(m: CMatrix, herm: f64, trace: f64, pos: f64) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidState(format!("matrix must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        let defect = m.hermiticity_defect();
        if !(defect <= herm) {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = m.trace();
        if !((tr - C64::new(1.0, 0.0)).norm() <= trace) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = linalg::min_eigenvalue(&m);
        if !(min >= -pos) {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(m))
    }

    /// Skips validation; callers must have checked the invariants.
    pub(crate) fn from_checked(m: CMatrix) -> Self {
        Self(m)
    }

    /// The projector |k⟩⟨k|.
    pub fn pure(dim: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Diagonal state with the given populations (must sum to 1).
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(populations))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.0[(i, i)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.population(i)).collect()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.0)
    }
}

/// H_S = Σ E_i |i⟩⟨i| and H_L = Σ Ω (σ_ij + σ_ji) over the drives.
pub fn build_hamiltonians(spec: &SystemSpec) -> (CMatrix, CMatrix) {
    let d = spec.dim();
    let h_s = CMatrix::from_diagonal(&spec.energies());
    let mut h_l = CMatrix::zeros(d, d);
    for (k, drive) in spec.drives().iter().enumerate() {
        let (u, l) = spec.drive_levels(k);
        h_l[(u, l)] += C64::new(drive.rabi, 0.0);
        h_l[(l, u)] += C64::new(drive.rabi, 0.0);
    }
    (h_s, h_l)
}

/// Superoperator of D[A]ρ = AρA† − ½(A†Aρ + ρA†A) on column-stacked ρ.
fn lindblad_superop(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let id = CMatrix::identity(d);
    let ada = &a.adjoint() * a;
    let jump = a.conj_kron(a);
    let anti = &id.kron(&ada) + &ada.transpose().kron(&id);
    &jump - &anti.scale_real(0.5)
}

impl CMatrix {
    // conj(A) ⊗ A, the vec form of ρ ↦ AρA†
    fn conj_kron(&self, a: &CMatrix) -> CMatrix {
        let conj = CMatrix::from_fn(self.nrows(), self.ncols(), |i, j| self[(i, j)].conj());
        conj.kron(a)
    }
}

fn basis_op(dim: usize, row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(row, col)] = C64::new(1.0, 0.0);
    m
}

/// d² × d² superoperator of the thermal transition `upper → lower`.
pub fn build_dissipator(dim: usize, upper: usize, lower: usize, kappa: f64, occupancy: f64) -> CMatrix {
    assert!(upper < dim && lower < dim, "transition level out of range");
    let n = dim * dim;
    if kappa == 0.0 {
        return CMatrix::zeros(n, n);
    }
    let lowering = basis_op(dim, lower, upper);
    let raising = basis_op(dim, upper, lower);
    let mut out = lindblad_superop(&lowering).scale_real(kappa * (occupancy + 1.0));
    if occupancy > 0.0 {
        out += &lindblad_superop(&raising).scale_real(kappa * occupancy);
    }
    out
}

/// The full generator and its per-term slices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    matrix: CMatrix,
    coherent: CMatrix,
    dissipators: Vec<CMatrix>,
}

impl Liouvillian {
    pub fn new(spec: &SystemSpec) -> Self {
        let d = spec.dim();
        let (_, h_l) = build_hamiltonians(spec);
        let id = CMatrix::identity(d);
        let commutator = &id.kron(&h_l) - &h_l.transpose().kron(&id);
        let coherent = commutator.scale(C64::new(0.0, -1.0));
        let dissipators: Vec<CMatrix> = spec
            .transitions()
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let (u, l) = spec.transition_levels(k);
                build_dissipator(d, u, l, t.kappa, spec.occupancy(k))
            })
            .collect();
        let mut matrix = coherent.clone();
        for slice in &dissipators {
            matrix += slice;
        }
        Self { dim: d, matrix, coherent, dissipators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// d² × d² generator acting on column-stacked ρ.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// −i(I ⊗ H_L − H_Lᵀ ⊗ I).
    pub fn coherent(&self) -> &CMatrix {
        &self.coherent
    }

    /// One slice per transition, in spec order.
    pub fn dissipators(&self) -> &[CMatrix] {
        &self.dissipators
    }

    /// dρ/dt for the given state.
    pub fn apply_rhs(&self, rho: &DensityMatrix) -> Result<CMatrix> {
        self.apply_to(rho.matrix())
    }

    /// dρ/dt for an arbitrary d × d operator.
    pub fn apply_to(&self, m: &CMatrix) -> Result<CMatrix> {
        self.check_dim(m)?;
        Ok(CMatrix::unvectorize(&self.matrix.mat_vec(&m.vectorize()), self.dim))
    }

    /// 𝓛_k(ρ) for a single transition.
    pub fn apply_dissipator(&self, k: usize, m: &CMatrix) -> Result<CMatrix> {
        self.check_dim(m)?;
        let slice = self.dissipators.get(k).ok_or_else(|| Error::Usage(format!("no transition with index {k}")))?;
        Ok(CMatrix::unvectorize(&slice.mat_vec(&m.vectorize()), self.dim))
    }

    fn check_dim(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::Usage(format!(
                "state is {}x{}, generator expects {}x{}",
                m.nrows(),
                m.ncols(),
                self.dim,
                self.dim
            )));
        }
        Ok(())
    }
}

/// dρ/dt by explicit commutator and dissipator arithmetic on ρ, without any
/// superoperator matrix.
pub fn rhs_direct(spec: &SystemSpec, rho: &CMatrix) -> CMatrix {
    let d = spec.dim();
    let (_, h_l) = build_hamiltonians(spec);
    let comm = &(&h_l * rho) - &(rho * &h_l);
    let mut out = comm.scale(C64::new(0.0, -1.0));
    let dissipate = |a: &CMatrix, rate: f64, out: &mut CMatrix| {
        let ad = a.adjoint();
        let ada = &ad * a;
        let jump = &(a * rho) * &ad;
        let anti = &(&ada * rho) + &(rho * &ada);
        *out += &(&jump - &anti.scale_real(0.5)).scale_real(rate);
    };
    for (k, t) in spec.transitions().iter().enumerate() {
        let (u, l) = spec.transition_levels(k);
        let n = spec.occupancy(k);
        dissipate(&basis_op(d, l, u), t.kappa * (n + 1.0), &mut out);
        dissipate(&basis_op(d, u, l), t.kappa * n, &mut out);
    }
    out
}
