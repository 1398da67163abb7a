//! Improved-scheme perturbation theory on finite Hermitian problems.
//!
//! A problem is given in the eigenbasis of the unperturbed Hamiltonian:
//! unperturbed energies `E_γ` and the perturbation matrix `H₁`. The full
//! Hamiltonian is first redivided into its diagonal `d = E + diag(H₁)` and a
//! strictly off-diagonal coupling `g₁`. The energy corrections `G⁽²⁾..G⁽⁴⁾`
//! are path sums over `g₁` with gap denominators taken from `d`.
//!
//! Transition probabilities come in three flavours:
//!
//! * traditional first order: `|g|² sin²(ω t/2ħ) / (ω/2)²` with the
//!   unperturbed gap `ω = E_γ − E_β`,
//! * improved: the same envelope, but the phase runs with the improved gap
//!   `ω̃ = Ẽ_γ − Ẽ_β`,
//! * exact: `|⟨φ_γ|exp(−iHt/ħ)|φ_β⟩|²` through a full eigendecomposition.

use num_complex::Complex64;
use thiserror::Error;

use crate::specmath::{self, HermitianMatrix, SpecMathError, SpectralDecomposition, StateVector};

/// Gaps with `|d_β − d_j| ≤ DEGENERACY_REL_TOL · max|d|` count as degenerate.
pub const DEGENERACY_REL_TOL: f64 = 1e-15;

pub const DEFAULT_ORDER: u8 = 4;

pub const MAX_ORDER: u8 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PerturbError {
    #[error("levels {level} and {other} are degenerate but coupled")]
    DegenerateDenominator { level: usize, other: usize },
    #[error("truncation order must be in 1..=4, got {0}")]
    InvalidOrder(u8),
    #[error("level index {index} out of range for dimension {dim}")]
    LevelOutOfRange { index: usize, dim: usize },
    #[error("initial and final level are both {0}")]
    SameLevel(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    SpecMath(#[from] SpecMathError),
}

pub type Result<T> = std::result::Result<T, PerturbError>;

/// Unperturbed energies plus the perturbation, both in the unperturbed eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationProblem {
    e0: Vec<f64>,
    h1: HermitianMatrix,
}

impl PerturbationProblem {
    pub fn new(e0: Vec<f64>, h1: HermitianMatrix) -> Result<Self> {
        if e0.is_empty() {
            return Err(PerturbError::InvalidParameter("problem must have at least one level"));
        }
        if e0.len() != h1.dim() {
            return Err(PerturbError::DimensionMismatch { expected: e0.len(), found: h1.dim() });
        }
        if e0.iter().any(|x| !x.is_finite()) {
            return Err(PerturbError::InvalidParameter("unperturbed energies must be finite"));
        }
        Ok(Self { e0, h1 })
    }

    pub fn dim(&self) -> usize {
        self.e0.len()
    }

    pub fn e0(&self) -> &[f64] {
        &self.e0
    }

    pub fn h1(&self) -> &HermitianMatrix {
        &self.h1
    }

    /// `diag(E) + H₁`
    pub fn full_hamiltonian(&self) -> HermitianMatrix {
        HermitianMatrix::diagonal(&self.e0)
            .add(&self.h1)
            .expect("dimensions checked at construction")
    }

    /// The same problem with the perturbation multiplied by `lambda`.
    pub fn with_coupling_scale(&self, lambda: f64) -> Self {
        Self { e0: self.e0.clone(), h1: self.h1.scaled(lambda) }
    }
}

/// `H = diag(d) + g₁` with `g₁` strictly off-diagonal.
///
/// The unperturbed energies are carried along because the first-order
/// amplitude and the probability envelopes keep the unperturbed gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct RedividedProblem {
    e0: Vec<f64>,
    d: Vec<f64>,
    g1: HermitianMatrix,
}

impl RedividedProblem {
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Diagonal of the redivided unperturbed part, `E_β + h₁^β`.
    pub fn diagonal(&self) -> &[f64] {
        &self.d
    }

    pub fn coupling(&self) -> &HermitianMatrix {
        &self.g1
    }

    pub fn unperturbed(&self) -> &[f64] {
        &self.e0
    }

    /// `diag(d) + g₁`, identical to the original full Hamiltonian.
    pub fn full_hamiltonian(&self) -> HermitianMatrix {
        HermitianMatrix::diagonal(&self.d)
            .add(&self.g1)
            .expect("dimensions agree by construction")
    }

    fn check_level(&self, index: usize) -> Result<()> {
        if index >= self.dim() {
            return Err(PerturbError::LevelOutOfRange { index, dim: self.dim() });
        }
        Ok(())
    }

    /// `1/(d_β − d_j)` for every `j`, `None` on the diagonal and for degenerate gaps.
    fn inverse_gaps(&self, beta: usize) -> Vec<Option<f64>> {
        let tol = DEGENERACY_REL_TOL * self.d.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        self.d
            .iter()
            .enumerate()
            .map(|(j, &dj)| {
                let gap = self.d[beta] - dj;
                (j != beta && gap.abs() > tol).then(|| 1.0 / gap)
            })
            .collect()
    }

    /// `w_j = g₁^{βj} / (d_β − d_j)`, zero where the coupling vanishes.
    fn weighted_row(&self, beta: usize, inv: &[Option<f64>]) -> Result<Vec<Complex64>> {
        (0..self.dim())
            .map(|j| {
                let g = self.g1.get(beta, j);
                if j == beta || g == Complex64::new(0.0, 0.0) {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                inv[j]
                    .map(|x| g * x)
                    .ok_or(PerturbError::DegenerateDenominator { level: beta, other: j })
            })
            .collect()
    }
}

pub fn redivide(p: &PerturbationProblem) -> RedividedProblem {
    let n = p.dim();
    let d: Vec<f64> = (0..n).map(|b| p.e0[b] + p.h1.get(b, b).re).collect();
    let g1 = HermitianMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            p.h1.get(i, j)
        }
    })
    .expect("off-diagonal part of a Hermitian matrix is Hermitian");
    RedividedProblem { e0: p.e0.clone(), d, g1 }
}

/// Second-order correction `Σ_{β₁} |g₁^{ββ₁}|² / (d_β − d_{β₁})`.
pub fn g2(r: &RedividedProblem, beta: usize) -> Result<f64> {
    r.check_level(beta)?;
    let inv = r.inverse_gaps(beta);
    let w = r.weighted_row(beta, &inv)?;
    Ok((0..r.dim()).map(|j| (w[j] * r.g1.get(j, beta)).re).sum())
}

/// Third-order correction, the sum over closed three-hop coupling paths.
pub fn g3(r: &RedividedProblem, beta: usize) -> Result<f64> {
    r.check_level(beta)?;
    let inv = r.inverse_gaps(beta);
    let w = r.weighted_row(beta, &inv)?;
    let n = r.dim();
    let mut total = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for k in 0..n {
        let into_k: Complex64 = (0..n).map(|j| w[j] * r.g1.get(j, k)).sum();
        // w_k^* = g₁^{kβ} / (d_β − d_k)
        let term = into_k * w[k].conj();
        magnitude += term.norm();
        total += term;
    }
    // Hermiticity makes the sum real up to rounding.
    debug_assert!(total.im.abs() <= 1e-12 * magnitude, "G3 imaginary residue {:e}", total.im);
    Ok(total.re)
}

/// Fourth-order correction: four-hop paths that avoid `β` at the midpoint,
/// minus the renormalisation term `(Σ|g|²/Δ²)(Σ|g|²/Δ)`.
pub fn g4(r: &RedividedProblem, beta: usize) -> Result<f64> {
    r.check_level(beta)?;
    let inv = r.inverse_gaps(beta);
    let w = r.weighted_row(beta, &inv)?;
    let n = r.dim();

    let mut paths = 0.0;
    for m in (0..n).filter(|&m| m != beta) {
        // amplitude of reaching m in two weighted hops; the way back is its conjugate
        let half: Complex64 = (0..n).map(|j| w[j] * r.g1.get(j, m)).sum();
        if half == Complex64::new(0.0, 0.0) {
            continue;
        }
        let x = inv[m].ok_or(PerturbError::DegenerateDenominator { level: beta, other: m })?;
        paths += half.norm_sqr() * x;
    }

    let mut squared = 0.0;
    let mut second = 0.0;
    for (j, x) in inv.iter().enumerate() {
        if let Some(x) = *x {
            let g = r.g1.get(beta, j).norm_sqr();
            squared += g * x * x;
            second += g * x;
        }
    }
    Ok(paths - squared * second)
}

/// Improved energies with their per-order corrections.
///
/// `g_terms[β] = [G⁽²⁾, G⁽³⁾, G⁽⁴⁾]`; corrections above the truncation
/// order are not evaluated and stored as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovedSpectrum {
    order: u8,
    g_terms: Vec<[f64; 3]>,
    energies: Vec<f64>,
}

impl ImprovedSpectrum {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn g_terms(&self) -> &[[f64; 3]] {
        &self.g_terms
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }
}

pub fn improved_energies(r: &RedividedProblem, order: u8) -> Result<ImprovedSpectrum> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(PerturbError::InvalidOrder(order));
    }
    let mut g_terms = Vec::with_capacity(r.dim());
    let mut energies = Vec::with_capacity(r.dim());
    for beta in 0..r.dim() {
        let mut terms = [0.0; 3];
        if order >= 2 {
            terms[0] = g2(r, beta)?;
        }
        if order >= 3 {
            terms[1] = g3(r, beta)?;
        }
        if order >= 4 {
            terms[2] = g4(r, beta)?;
        }
        energies.push(r.d[beta] + terms[0] + terms[1] + terms[2]);
        g_terms.push(terms);
    }
    Ok(ImprovedSpectrum { order, g_terms, energies })
}

/// Outcome of a transition-probability evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionResult {
    pub gamma: usize,
    pub beta: usize,
    pub probability: f64,
    /// The phase `ω t / 2ħ` that entered the `sin²`.
    pub angular_argument: f64,
}

fn check_evolution_params(t: f64, hbar: f64) -> Result<()> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(PerturbError::InvalidParameter("hbar must be positive and finite"));
    }
    if !t.is_finite() {
        return Err(PerturbError::InvalidParameter("time must be finite"));
    }
    Ok(())
}

fn check_pair(dim: usize, gamma: usize, beta: usize) -> Result<()> {
    for index in [gamma, beta] {
        if index >= dim {
            return Err(PerturbError::LevelOutOfRange { index, dim });
        }
    }
    if gamma == beta {
        return Err(PerturbError::SameLevel(gamma));
    }
    Ok(())
}

/// Unperturbed gap `E_γ − E_β`, or an error if it vanishes while `g` does not.
fn unperturbed_gap(r: &RedividedProblem, gamma: usize, beta: usize, g: Complex64) -> Result<f64> {
    let gap = r.e0[gamma] - r.e0[beta];
    let tol = DEGENERACY_REL_TOL * r.e0.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if gap.abs() <= tol && g != Complex64::new(0.0, 0.0) {
        return Err(PerturbError::DegenerateDenominator { level: gamma, other: beta });
    }
    Ok(gap)
}

fn check_spectrum(r: &RedividedProblem, spectrum: &ImprovedSpectrum) -> Result<()> {
    if spectrum.dim() != r.dim() {
        return Err(PerturbError::DimensionMismatch { expected: r.dim(), found: spectrum.dim() });
    }
    Ok(())
}

/// First-order coefficient `g₁^{γβ}/(E_γ − E_β) · (1 − exp(i ω̃_{γβ} t/ħ))`.
pub fn first_order_amplitude(
    r: &RedividedProblem,
    spectrum: &ImprovedSpectrum,
    gamma: usize,
    beta: usize,
    t: f64,
    hbar: f64,
) -> Result<Complex64> {
    check_pair(r.dim(), gamma, beta)?;
    check_spectrum(r, spectrum)?;
    check_evolution_params(t, hbar)?;
    let g = r.g1.get(gamma, beta);
    if g == Complex64::new(0.0, 0.0) {
        return Ok(g);
    }
    let gap = unperturbed_gap(r, gamma, beta, g)?;
    let omega = spectrum.energies[gamma] - spectrum.energies[beta];
    Ok(g / gap * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, omega * t / hbar)))
}

fn sin_squared_probability(
    r: &RedividedProblem,
    gamma: usize,
    beta: usize,
    phase_gap: f64,
    t: f64,
    hbar: f64,
) -> Result<TransitionResult> {
    let g = r.g1.get(gamma, beta);
    let angular_argument = phase_gap * t / (2.0 * hbar);
    let probability = if g == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        let half_gap = unperturbed_gap(r, gamma, beta, g)? / 2.0;
        g.norm_sqr() * angular_argument.sin().powi(2) / (half_gap * half_gap)
    };
    Ok(TransitionResult { gamma, beta, probability, angular_argument })
}

/// `|g₁^{γβ}|² sin²(ω̃ t/2ħ) / (ω/2)²`: improved phase, unperturbed envelope.
pub fn transition_probability_improved(
    r: &RedividedProblem,
    spectrum: &ImprovedSpectrum,
    gamma: usize,
    beta: usize,
    t: f64,
    hbar: f64,
) -> Result<TransitionResult> {
    check_pair(r.dim(), gamma, beta)?;
    check_spectrum(r, spectrum)?;
    check_evolution_params(t, hbar)?;
    let omega = spectrum.energies[gamma] - spectrum.energies[beta];
    sin_squared_probability(r, gamma, beta, omega, t, hbar)
}

/// `|g₁^{γβ}|² sin²(ω t/2ħ) / (ω/2)²` with `ω = E_γ − E_β`.
pub fn transition_probability_traditional(
    r: &RedividedProblem,
    gamma: usize,
    beta: usize,
    t: f64,
    hbar: f64,
) -> Result<TransitionResult> {
    check_pair(r.dim(), gamma, beta)?;
    check_evolution_params(t, hbar)?;
    let omega = r.e0[gamma] - r.e0[beta];
    sin_squared_probability(r, gamma, beta, omega, t, hbar)
}

/// `|⟨φ_γ|exp(−iHt/ħ)|φ_β⟩|²` from a full diagonalisation of `H`.
///
/// The reported angular argument is `(E^T_a − E^T_b) t/2ħ`, where `a` and
/// `b` are the exact eigenstates with the largest overlap on `φ_γ` and `φ_β`.
pub fn transition_probability_exact(
    p: &PerturbationProblem,
    gamma: usize,
    beta: usize,
    t: f64,
    hbar: f64,
) -> Result<TransitionResult> {
    check_pair(p.dim(), gamma, beta)?;
    let dec = specmath::eigendecompose(&p.full_hamiltonian())?;
    transition_probability_from_decomposition(&dec, gamma, beta, t, hbar)
}

/// As [`transition_probability_exact`], reusing an existing decomposition.
pub fn transition_probability_from_decomposition(
    dec: &SpectralDecomposition,
    gamma: usize,
    beta: usize,
    t: f64,
    hbar: f64,
) -> Result<TransitionResult> {
    check_pair(dec.dim(), gamma, beta)?;
    check_evolution_params(t, hbar)?;
    let evolved = specmath::evolve(dec, &StateVector::basis(dec.dim(), beta), t, hbar)?;
    let probability = evolved.amplitudes()[gamma].norm_sqr();

    let label = |basis: usize| {
        (0..dec.dim())
            .max_by(|&a, &b| {
                dec.vector_component(basis, a)
                    .norm()
                    .total_cmp(&dec.vector_component(basis, b).norm())
            })
            .expect("non-empty decomposition")
    };
    let lambda = dec.eigenvalues();
    let angular_argument = (lambda[label(gamma)] - lambda[label(beta)]) * t / (2.0 * hbar);
    Ok(TransitionResult { gamma, beta, probability, angular_argument })
}
