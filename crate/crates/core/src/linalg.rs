//! Small dense complex linear algebra.
//!
//! Everything here works on row-major [`CMatrix`] values of modest size
//! (at most 256 × 256 for a 16-level system). Vectorization of operators is
//! column-stacking: `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`. All superoperator code in
//! the crate goes through [`CMatrix::vectorize`] and [`CMatrix::unvectorize`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use libm::{fabs, sqrt};

/// Complex double.
pub type C64 = num_complex::Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (largest column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest |a_ij − conj(a_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.rows];
        self.mat_vec_into(v, &mut out);
        out
    }

    pub fn mat_vec_into(&self, v: &[C64], out: &mut [C64]) {
        assert_eq!(self.cols, v.len(), "mat_vec dimension mismatch");
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            *o = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        Self::from_fn(r, c, |i, j| self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)])
    }

    /// Column-stacking vectorization.
    pub fn vectorize(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`CMatrix::vectorize`] for a `dim × dim` operator.
    pub fn unvectorize(v: &[C64], dim: usize) -> Self {
        assert_eq!(v.len(), dim * dim, "unvectorize length mismatch");
        Self::from_fn(dim, dim, |i, j| v[j * dim + i])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Solves `A X = B` by LU decomposition with partial pivoting.
///
/// Returns `None` when a pivot vanishes.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    assert!(a.is_square() && a.rows == b.rows, "solve dimension mismatch");
    let n = a.rows;
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm())).unwrap_or(k);
        if lu[(p, k)].norm() <= f64::EPSILON * scale * 1e-4 {
            return None;
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            for j in 0..x.cols {
                x.data.swap(k * x.cols + j, p * x.cols + j);
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
            for j in 0..x.cols {
                let t = x[(k, j)];
                x[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let pivot = lu[(k, k)];
        for j in 0..x.cols {
            let mut s = x[(k, j)];
            for m in k + 1..n {
                s -= lu[(k, m)] * x[(m, j)];
            }
            x[(k, j)] = s / pivot;
        }
    }
    Some(x)
}

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant (Higham 2005).
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.rows;
    const THETA_13: f64 = 5.371_920_351_148_152;
    let norm = a.norm_one();
    let squarings = if norm > THETA_13 { libm::ceil(libm::log2(norm / THETA_13)) as i32 } else { 0 };
    let a = a.scale_real(libm::pow(2.0, -f64::from(squarings)));

    let b = PADE13;
    let id = CMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |terms: &[(f64, &CMatrix)]| {
        let mut acc = CMatrix::zeros(n, n);
        for &(c, m) in terms {
            acc += &m.scale_real(c);
        }
        acc
    };
    let u_inner = &a6 * &lin(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u_inner = &u_inner + &lin(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)]);
    let u = &a * &u_inner;
    let v = &a6 * &lin(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v = &v + &lin(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)]);

    let mut r = solve(&(&v - &u), &(&v + &u)).expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Singular values and right singular vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Columns are right singular vectors, ordered like `singular_values`.
    pub v: CMatrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Orthogonalizes the columns of `a` by plane rotations; the accumulated
/// rotations are the right singular vectors and the final column norms are
/// the singular values. Small singular values come out with high relative
/// accuracy, which is what null-space extraction relies on.
pub fn svd(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    // column-major working copies
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let tol = f64::EPSILON * (m.max(1) as f64);

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let (c, s) = jacobi_cs(alpha, beta, g);
                rotate_pair(&mut cols, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| sqrt(c.iter().map(|z| z.norm_sqr()).sum())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values = order.iter().map(|&k| norms[k]).collect();
    let v = CMatrix::from_fn(n, n, |i, j| v[order[j]][i]);
    Svd { singular_values, v }
}

/// Rotation that diagonalizes the real symmetric 2×2 block [[α, g], [g, β]].
fn jacobi_cs(alpha: f64, beta: f64, g: f64) -> (f64, f64) {
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta >= 0.0 { 1.0 / (zeta + sqrt(1.0 + zeta * zeta)) } else { -1.0 / (-zeta + sqrt(1.0 + zeta * zeta)) };
    let c = 1.0 / sqrt(1.0 + t * t);
    (c, c * t)
}

// x_p ← c x_p − s (w x_q),  x_q ← s x_p + c (w x_q)
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, w: C64) {
    let (head, tail) = cols.split_at_mut(q);
    let (xp, xq) = (&mut head[p], &mut tail[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = w * *b;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

/// Orthonormal basis of the numerical null space of `a`: right singular
/// vectors whose singular value is at most `rel_tol` times the largest.
///
/// Returns the basis as columns together with the full singular spectrum.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> (CMatrix, Vec<f64>) {
    let svd = svd(a);
    let smax = svd.singular_values.first().copied().unwrap_or(0.0);
    let cut = rel_tol * smax;
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] <= cut || smax == 0.0).collect();
    let basis = CMatrix::from_fn(a.cols, keep.len(), |i, j| svd.v[(i, keep[j])]);
    (basis, svd.singular_values)
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues ascend; eigenvectors are the matching columns.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(a.is_square(), "hermitian_eigen requires a square matrix");
    let n = a.rows;
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                let gn = g.norm();
                if gn <= 1e-300 {
                    continue;
                }
                let w = (g / gn).conj();
                let (c, s) = jacobi_cs(m[(p, p)].re, m[(q, q)].re, gn);
                // columns: A ← A U with U = [[c, s], [−s w, c w]] on (p, q)
                for k in 0..n {
                    let (ap, aq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = ap * c - aq * w * s;
                    m[(k, q)] = ap * s + aq * w * c;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * c - vq * w * s;
                    v[(k, q)] = vp * s + vq * w * c;
                }
                // rows: A ← U† A
                let wc = w.conj();
                for k in 0..n {
                    let (ap, aq) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = ap * c - aq * wc * s;
                    m[(q, k)] = ap * s + aq * wc * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
            }
        }
    }

    let evals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| evals[i].total_cmp(&evals[j]));
    let sorted = order.iter().map(|&k| evals[k]).collect();
    let vecs = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (sorted, vecs)
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigen(a).0.first().copied().unwrap_or(0.0)
}

pub(crate) fn abs(x: f64) -> f64 {
    fabs(x)
}
