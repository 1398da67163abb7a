//! Dense complex linear algebra for small Hermitian systems.
//!
//! Everything here works on tiny matrices (dimension well below 64), so the
//! storage is a flat row-major `Vec<Complex64>` and the eigensolver is a
//! cyclic complex Jacobi iteration. The decomposition doubles as the exact
//! reference that the perturbative results are checked against.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Absolute tolerance on `|a_ij - conj(a_ji)|` accepted by [`HermitianMatrix::new`].
pub const HERMITICITY_TOL: f64 = 1e-13;

/// Jacobi stops once the off-diagonal Frobenius norm is below this fraction of `‖H‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-14;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues closer than this fraction of `‖H‖_F` are ordered by eigenvector shape.
const TIE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecMathError {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:e}")]
    NonHermitianInput { row: usize, col: usize, deviation: f64 },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("expected {expected} entries, found {found}")]
    InvalidShape { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T> = std::result::Result<T, SpecMathError>;

/// A dense complex square matrix that is Hermitian by construction.
///
/// Inputs within [`HERMITICITY_TOL`] of Hermitian are accepted and stored
/// exactly symmetrized, so downstream code may rely on `a_ij == conj(a_ji)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(SpecMathError::InvalidParameter("dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(SpecMathError::InvalidShape { expected: dim * dim, found: entries.len() });
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpecMathError::NonFinite(pos));
        }
        let mut data = entries;
        for i in 0..dim {
            let d = data[i * dim + i];
            if d.im.abs() > HERMITICITY_TOL {
                return Err(SpecMathError::NonHermitianInput { row: i, col: i, deviation: d.im.abs() });
            }
            data[i * dim + i] = Complex64::new(d.re, 0.0);
            for j in (i + 1)..dim {
                let upper = data[i * dim + j];
                let lower = data[j * dim + i];
                let deviation = (upper - lower.conj()).norm();
                if deviation > HERMITICITY_TOL {
                    return Err(SpecMathError::NonHermitianInput { row: i, col: j, deviation });
                }
                if upper != lower.conj() {
                    let sym = (upper + lower.conj()) * 0.5;
                    data[i * dim + j] = sym;
                    data[j * dim + i] = sym.conj();
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::new(dim, entries)
    }

    /// Builds a real symmetric matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(SpecMathError::InvalidShape { expected: dim, found: row.len() });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * dim + i] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal_values().iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(SpecMathError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    /// `self · ψ`
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim {
            return Err(SpecMathError::DimensionMismatch { expected: self.dim, found: psi.dim() });
        }
        let amps = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j) * psi.amplitudes[j])
                    .sum::<Complex64>()
            })
            .collect();
        Ok(StateVector::new(amps))
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6e}{:+.6e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A vector of complex amplitudes in some fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Unit vector `e_index` of length `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.amplitudes.iter().map(|z| z / n).collect())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(SpecMathError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.amplitudes.iter().map(|z| z * factor).collect())
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Real eigenvalues in ascending order with a unitary matrix of eigenvectors.
///
/// Column `k` of the eigenvector matrix belongs to `eigenvalues[k]` and is
/// phased so that its largest-magnitude component is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    // row-major, columns are eigenvectors
    vectors: Vec<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `row` of eigenvector `k`.
    #[inline]
    pub fn vector_component(&self, row: usize, k: usize) -> Complex64 {
        self.vectors[row * self.dim + k]
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        StateVector::new((0..self.dim).map(|i| self.vector_component(i, k)).collect())
    }

    pub fn eigenvectors(&self) -> Vec<StateVector> {
        (0..self.dim).map(|k| self.eigenvector(k)).collect()
    }

    /// `V · diag(λ) · V†`
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| {
                        self.vector_component(i, k) * self.eigenvalues[k] * self.vector_component(j, k).conj()
                    })
                    .sum();
            }
        }
        out
    }
}

/// Diagonalizes `m` with cyclic complex Jacobi rotations.
pub fn eigendecompose(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let mut a = m.entries().to_vec();
    let mut v = HermitianMatrix::identity(n).data;

    let scale = m.frobenius_norm();
    let tol = JACOBI_REL_TOL * scale;
    let off_norm = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(SpecMathError::ConvergenceFailure { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();

    // Fix the phase of every column and remember where it peaks.
    let mut dominant = vec![0usize; n];
    for k in 0..n {
        let peak = (0..n).map(|i| v[i * n + k].norm()).fold(0.0, f64::max);
        let d = (0..n)
            .find(|&i| v[i * n + k].norm() >= peak * (1.0 - 1e-12))
            .unwrap_or(0);
        dominant[k] = d;
        let pivot = v[d * n + k];
        let phase = pivot.conj() / pivot.norm();
        for i in 0..n {
            v[i * n + k] *= phase;
        }
        v[d * n + k] = Complex64::new(v[d * n + k].re, 0.0);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eigenvalues[x].total_cmp(&eigenvalues[y]));
    let tie = TIE_REL_TOL * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[order[end]] - eigenvalues[order[start]] <= tie {
            end += 1;
        }
        order[start..end].sort_by_key(|&k| dominant[k]);
        start = end;
    }

    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_k] = v[i * n + old_k];
        }
    }
    Ok(SpectralDecomposition {
        dim: n,
        eigenvalues: order.iter().map(|&k| eigenvalues[k]).collect(),
        vectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let e = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + tau.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // A <- A J, V <- V J
    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = akp * c - akq * e.conj() * s;
        a[k * n + q] = akp * e * s + akq * c;
        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
        v[k * n + p] = vkp * c - vkq * e.conj() * s;
        v[k * n + q] = vkp * e * s + vkq * c;
    }
    // A <- J† A
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = apk * c - aqk * e * s;
        a[q * n + k] = apk * e.conj() * s + aqk * c;
    }
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
}

/// Propagates `psi0` for time `t` under the Hamiltonian behind `dec`:
/// `Σ_k exp(-i λ_k t / ħ) v_k ⟨v_k|ψ₀⟩`.
pub fn evolve(dec: &SpectralDecomposition, psi0: &StateVector, t: f64, hbar: f64) -> Result<StateVector> {
    if psi0.dim() != dec.dim() {
        return Err(SpecMathError::DimensionMismatch { expected: dec.dim(), found: psi0.dim() });
    }
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(SpecMathError::InvalidParameter("hbar must be positive and finite"));
    }
    if !t.is_finite() {
        return Err(SpecMathError::InvalidParameter("time must be finite"));
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let n = dec.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let overlap: Complex64 = (0..n)
            .map(|i| dec.vector_component(i, k).conj() * psi0.amplitudes()[i])
            .sum();
        let weight = overlap * Complex64::from_polar(1.0, -dec.eigenvalues()[k] * t / hbar);
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += dec.vector_component(i, k) * weight;
        }
    }
    Ok(StateVector::new(out))
}

/// `⟨bra|m|ket⟩`
pub fn matrix_element(bra: &StateVector, m: &HermitianMatrix, ket: &StateVector) -> Result<Complex64> {
    if bra.dim() != m.dim() {
        return Err(SpecMathError::DimensionMismatch { expected: m.dim(), found: bra.dim() });
    }
    bra.inner(&m.apply(ket)?)
}
