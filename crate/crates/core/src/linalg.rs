//! Dense complex linear algebra for the small Hilbert spaces used by the
//! protocols (dimension at most 16).
//!
//! Everything here is a pure function of its inputs. Hermitian spectra come
//! from a cyclic complex Jacobi eigensolver, which is exact enough at this
//! size that all downstream probabilities are reproducible to ~1e-14.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{dimension, validation, Error, Result};

pub type C64 = Complex64;

/// Largest supported row or column count.
pub const MAX_DIM: usize = 16;
/// Tolerance for structural invariants (hermiticity, normalization, equality).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for quantities derived through a numerical routine.
pub const DERIVED_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (relative to `max(1, ‖A‖_F)`).
pub const JACOBI_OFF_DIAG_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
        return Err(dimension(format!(
            "matrix shape {rows}x{cols} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(dimension(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut m = Self::zeros(n, n)?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    *out.at_mut(i, j) += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dimension(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }
}

impl PartialEq for ComplexMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, STRUCTURAL_TOL)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on shape mismatch; use the `try_*` / `matmul` methods
// where shapes are not known statically.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix add")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix mul")
    }
}

/// Tensor (Kronecker) product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(dimension(format!(
            "tensor product {rows}x{cols} exceeds {MAX_DIM}"
        )));
    }
    let mut out = ComplexMatrix::zeros(rows, cols)?;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a.get(i, j);
            for k in 0..b.rows {
                for l in 0..b.cols {
                    *out.at_mut(i * b.rows + k, j * b.cols + l) = s * b.get(k, l);
                }
            }
        }
    }
    Ok(out)
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_shape(amplitudes.len(), 1)?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(validation(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_shape(dim, 1)?;
        if index >= dim {
            return Err(dimension(format!("basis index {index} >= dim {dim}")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        check_shape(dim, 1)?;
        let mut amplitudes = Vec::with_capacity(dim);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self { amplitudes })
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for a in &self.amplitudes {
            for b in &self.amplitudes {
                data.push(a * b.conj());
            }
        }
        ComplexMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
        }
    }

    /// Applies a unitary. The result is re-validated for normalization.
    pub fn evolve(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Self::new(unitary.apply(&self.amplitudes)?)
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(dimension("density matrix must be square"));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STRUCTURAL_TOL {
            return Err(validation(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
            return Err(validation(format!("trace {tr} is not 1")));
        }
        let lowest = hermitian_eigenvalues(&matrix)?[0];
        if lowest < -DERIVED_TOL {
            return Err(validation(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(Self { matrix })
    }

    /// Convex combination `Σ wᵢ ρᵢ`.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| validation("empty mixture"))?;
        if parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(validation("negative mixture weight"));
        }
        let mut acc = first.1.matrix.scale(first.0);
        for (w, rho) in &parts[1..] {
            acc = acc.try_add(&rho.matrix.scale(*w))?;
        }
        Self::new(acc)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(Self {
            matrix: ComplexMatrix::identity(dim)?.scale(1.0 / dim as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: kron(&self.matrix, &other.matrix)?,
        })
    }
}

/// Which factor of a bipartite space to keep when tracing out the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn partial_trace(
    rho: &DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != rho.dim() {
        return Err(dimension(format!(
            "{dim_a} x {dim_b} does not factor dimension {}",
            rho.dim()
        )));
    }
    let m = &rho.matrix;
    let out = match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(dim_a, dim_a)?;
            for i in 0..dim_a {
                for j in 0..dim_a {
                    *out.at_mut(i, j) = (0..dim_b).map(|k| m.get(i * dim_b + k, j * dim_b + k)).sum();
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(dim_b, dim_b)?;
            for k in 0..dim_b {
                for l in 0..dim_b {
                    *out.at_mut(k, l) = (0..dim_a).map(|i| m.get(i * dim_b + k, i * dim_b + l)).sum();
                }
            }
            out
        }
    };
    DensityMatrix::new(out)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows).map(|i| self.vectors.get(i, k)).collect()
    }
}

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(dimension("eigenproblem needs a square matrix"));
    }
    let defect = m.hermiticity_defect();
    if defect > STRUCTURAL_TOL {
        return Err(validation(format!("not Hermitian (defect {defect:e})")));
    }
    let n = m.rows;
    // Work on the exactly Hermitian part so rounding in the input cannot
    // leave imaginary mass on the diagonal.
    let mut a = m.clone();
    for i in 0..n {
        a.at_mut(i, i).im = 0.0;
        for j in (i + 1)..n {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            *a.at_mut(i, j) = avg;
            *a.at_mut(j, i) = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n)?;
    let threshold = JACOBI_OFF_DIAG_TOL * a.frobenius_norm().max(1.0);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) < threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase_conj = (apq / r).conj();
                let theta = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] in the (p, q) plane.
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase_conj * (-s);
                let g_qq = phase_conj * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    *a.at_mut(k, p) = akp * g_pp + akq * g_qp;
                    *a.at_mut(k, q) = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    *a.at_mut(p, k) = g_pp.conj() * apk + g_qp.conj() * aqk;
                    *a.at_mut(q, k) = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                *a.at_mut(p, q) = ZERO;
                *a.at_mut(q, p) = ZERO;
                a.at_mut(p, p).im = 0.0;
                a.at_mut(q, q).im = 0.0;
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    *v.at_mut(k, p) = vkp * g_pp + vkq * g_qp;
                    *v.at_mut(k, q) = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        sweeps += 1;
        converged = off_norm(&a) < threshold;
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n)?;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            *vectors.at_mut(row, col) = v.get(row, src);
        }
    }
    Ok(HermitianEigen { values, vectors })
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.values)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

fn check_priors(p0: f64, p1: f64) -> Result<()> {
    let ok = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
    if !ok(p0) || !ok(p1) || (p0 + p1 - 1.0).abs() > STRUCTURAL_TOL {
        return Err(validation(format!("priors ({p0}, {p1}) do not sum to 1")));
    }
    Ok(())
}

fn helstrom_operator(p0: f64, rho0: &DensityMatrix, p1: f64, rho1: &DensityMatrix) -> Result<ComplexMatrix> {
    check_priors(p0, p1)?;
    rho0.matrix.scale(p0).try_sub(&rho1.matrix.scale(p1))
}

/// Optimal success probability for discriminating `rho0` (prior `p0`)
/// from `rho1` (prior `p1`): `½(1 + ‖p0·rho0 − p1·rho1‖₁)`.
pub fn helstrom_prob(p0: f64, rho0: &DensityMatrix, p1: f64, rho1: &DensityMatrix) -> Result<f64> {
    let delta = helstrom_operator(p0, rho0, p1, rho1)?;
    let value = 0.5 * (1.0 + trace_norm(&delta)?);
    Ok(value.clamp(p0.max(p1), 1.0))
}

/// The optimal measurement `(Π₀, Π₁)`. `Π₀` projects onto the non-negative
/// eigenspace of `p0·rho0 − p1·rho1`, so null directions go to outcome 0.
pub fn helstrom_projectors(
    p0: f64,
    rho0: &DensityMatrix,
    p1: f64,
    rho1: &DensityMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let delta = helstrom_operator(p0, rho0, p1, rho1)?;
    let eig = hermitian_eigen(&delta)?;
    let n = delta.rows;
    let mut pi0 = ComplexMatrix::zeros(n, n)?;
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > -DERIVED_TOL {
            let u = eig.vector(k);
            for i in 0..n {
                for j in 0..n {
                    *pi0.at_mut(i, j) += u[i] * u[j].conj();
                }
            }
        }
    }
    let pi1 = ComplexMatrix::identity(n)?.try_sub(&pi0)?;
    Ok((pi0, pi1))
}

/// `Tr(Π ρ)` clamped at zero.
pub fn born_probability(projector: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    let n = rho.dim();
    if projector.rows != n || projector.cols != n {
        return Err(dimension("projector and state dimensions differ"));
    }
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (projector.get(i, j) * rho.matrix.get(j, i)).re;
        }
    }
    Ok(s.max(0.0))
}

fn validate_measurement(projectors: &[ComplexMatrix], dim: usize) -> Result<()> {
    if projectors.is_empty() {
        return Err(validation("empty measurement"));
    }
    let mut total = ComplexMatrix::zeros(dim, dim)?;
    for (k, p) in projectors.iter().enumerate() {
        if p.rows != dim || p.cols != dim {
            return Err(dimension(format!("projector {k} has wrong shape")));
        }
        if !p.is_hermitian(DERIVED_TOL) {
            return Err(validation(format!("projector {k} is not Hermitian")));
        }
        if !p.matmul(p)?.approx_eq(p, DERIVED_TOL) {
            return Err(validation(format!("operator {k} is not idempotent")));
        }
        total = total.try_add(p)?;
    }
    if !total.approx_eq(&ComplexMatrix::identity(dim)?, DERIVED_TOL) {
        return Err(validation("projectors do not sum to the identity"));
    }
    Ok(())
}

fn invert_cumulative(probs: &[f64], rand: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&rand) {
        return Err(validation(format!("uniform sample {rand} outside [0, 1)")));
    }
    let mut cum = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        cum += p;
        if rand < cum {
            return Ok(k);
        }
    }
    // Rounding left the total just under `rand`: take the last reachable outcome.
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .ok_or_else(|| Error::Numeric("all outcome probabilities vanish".into()))
}

/// Samples a projective measurement by cumulative inversion of `rand`
/// over outcomes in index order.
pub fn measure(state: &DensityMatrix, projectors: &[ComplexMatrix], rand: f64) -> Result<usize> {
    validate_measurement(projectors, state.dim())?;
    let probs = projectors
        .iter()
        .map(|p| born_probability(p, state))
        .collect::<Result<Vec<_>>>()?;
    invert_cumulative(&probs, rand)
}

/// Like [`measure`] on a pure state, also returning the post-measurement state.
pub fn measure_pure(
    state: &PureState,
    projectors: &[ComplexMatrix],
    rand: f64,
) -> Result<(usize, PureState)> {
    validate_measurement(projectors, state.dim())?;
    let projected = projectors
        .iter()
        .map(|p| p.apply(&state.amplitudes))
        .collect::<Result<Vec<_>>>()?;
    let probs: Vec<f64> = projected
        .iter()
        .map(|v| v.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let k = invert_cumulative(&probs, rand)?;
    let norm = probs[k].sqrt();
    let post = projected[k].iter().map(|z| z / norm).collect::<Vec<_>>();
    Ok((k, PureState { amplitudes: post }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bits: &[f64]) -> PureState {
        PureState::from_real(bits).unwrap()
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4).unwrap());
    }

    #[test]
    fn kron_of_basis_projectors() {
        let p0 = ket(&[1.0, 0.0]).projector();
        let p1 = ket(&[0.0, 1.0]).projector();
        let out = kron(&p0, &p1).unwrap();
        assert_eq!(out, ComplexMatrix::diagonal(&[0.0, 1.0, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn kron_rejects_oversize() {
        let a = ComplexMatrix::identity(5).unwrap();
        assert!(matches!(kron(&a, &a), Err(Error::Dimension(_))));
        assert!(ComplexMatrix::identity(17).is_err());
    }

    #[test]
    fn partial_trace_of_phi0() {
        // (|00⟩ + |22⟩)/√2 on two qutrits
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = [0.0; 9];
        amps[0] = h;
        amps[8] = h;
        let rho = ket(&amps).density();
        let reduced = partial_trace(&rho, 3, 3, Subsystem::B).unwrap();
        let expected = ComplexMatrix::diagonal(&[0.5, 0.0, 0.5]).unwrap();
        assert_eq!(reduced.matrix(), &expected);
    }

    #[test]
    fn partial_trace_of_product() {
        let ra = DensityMatrix::mixture(&[
            (0.3, &ket(&[1.0, 0.0]).density()),
            (0.7, &ket(&[0.6, 0.8]).density()),
        ])
        .unwrap();
        let rb = DensityMatrix::maximally_mixed(3).unwrap();
        let joint = ra.kron(&rb).unwrap();
        assert_eq!(partial_trace(&joint, 2, 3, Subsystem::A).unwrap(), ra);
        assert_eq!(partial_trace(&joint, 2, 3, Subsystem::B).unwrap(), rb);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = ket(&[h, 0.0, 0.0, h]).density();
        let r = partial_trace(&rho, 2, 2, Subsystem::B).unwrap();
        assert_eq!(r, DensityMatrix::maximally_mixed(2).unwrap());
    }

    #[test]
    fn partial_trace_bad_factorization() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(
            partial_trace(&rho, 3, 2, Subsystem::A),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = ComplexMatrix::diagonal(&[3.0, -1.0, 0.0]).unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(ev, vec![-1.0, 0.0, 3.0]);
    }

    #[test]
    fn eigen_reconstructs_complex_hermitian() {
        let m = ComplexMatrix::new(
            3,
            3,
            vec![
                C64::new(2.0, 0.0),
                C64::new(1.0, -1.0),
                C64::new(0.0, 0.5),
                C64::new(1.0, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.25, 0.0),
                C64::new(0.0, -0.5),
                C64::new(0.25, 0.0),
                C64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        let eig = hermitian_eigen(&m).unwrap();
        let d = ComplexMatrix::diagonal(&eig.values).unwrap();
        let back = &(&eig.vectors * &d) * &eig.vectors.adjoint();
        assert!(back.approx_eq(&m, 1e-12));
        let vv = &eig.vectors.adjoint() * &eig.vectors;
        assert!(vv.approx_eq(&ComplexMatrix::identity(3).unwrap(), 1e-12));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn trace_norm_of_signature() {
        let m = ComplexMatrix::diagonal(&[1.0, -1.0]).unwrap();
        assert!((trace_norm(&m).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn helstrom_trivial_cases() {
        let zero = ket(&[1.0, 0.0]).density();
        let one = ket(&[0.0, 1.0]).density();
        assert_eq!(helstrom_prob(0.5, &zero, 0.5, &zero).unwrap(), 0.5);
        assert!((helstrom_prob(0.5, &zero, 0.5, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            helstrom_prob(0.6, &zero, 0.6, &one),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn helstrom_projectors_basis_and_tie() {
        let zero = ket(&[1.0, 0.0]).density();
        let one = ket(&[0.0, 1.0]).density();
        let (p0, p1) = helstrom_projectors(0.5, &zero, 0.5, &one).unwrap();
        assert_eq!(p0, zero.matrix().clone());
        assert_eq!(p1, one.matrix().clone());

        let (q0, q1) = helstrom_projectors(0.5, &zero, 0.5, &zero).unwrap();
        // zero.matrix has eigenvalue 0 on |1⟩ after subtraction; all of C² goes to Π₀
        assert_eq!(q0, ComplexMatrix::identity(2).unwrap());
        assert_eq!(q1, ComplexMatrix::zeros(2, 2).unwrap());
    }

    #[test]
    fn measure_basis_and_mixed() {
        let zero = ket(&[1.0, 0.0]).density();
        let proj = [ket(&[1.0, 0.0]).projector(), ket(&[0.0, 1.0]).projector()];
        for r in [0.0, 0.5, 0.999_999] {
            assert_eq!(measure(&zero, &proj, r).unwrap(), 0);
        }
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(measure(&mixed, &proj, 0.3).unwrap(), 0);
        assert_eq!(measure(&mixed, &proj, 0.7).unwrap(), 1);
    }

    #[test]
    fn measure_rejects_incomplete() {
        let zero = ket(&[1.0, 0.0]).density();
        let proj = [ket(&[1.0, 0.0]).projector()];
        assert!(matches!(measure(&zero, &proj, 0.1), Err(Error::Validation(_))));
        let both = [ket(&[1.0, 0.0]).projector(), ket(&[0.0, 1.0]).projector()];
        assert!(measure(&zero, &both, 1.0).is_err());
    }

    #[test]
    fn measure_pure_collapses() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ket(&[h, h]);
        let proj = [ket(&[1.0, 0.0]).projector(), ket(&[0.0, 1.0]).projector()];
        let (k, post) = measure_pure(&plus, &proj, 0.75).unwrap();
        assert_eq!(k, 1);
        assert_eq!(post, ket(&[0.0, 1.0]));
    }

    #[test]
    fn density_validation() {
        let bad_trace = ComplexMatrix::diagonal(&[0.5, 0.6]).unwrap();
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = ComplexMatrix::diagonal(&[1.5, -0.5]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        assert!(PureState::from_real(&[1.0, 1.0]).is_err());
    }
}
