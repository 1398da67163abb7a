//! Hydrogen ground-state hyperfine structure in a constant field along `+z`.
//!
//! `H = W σ_e·σ_p + B μ_e σ_ez`, with the proton Zeeman term dropped. In the
//! coupled basis the contact term is diagonal, `(W, W, W, −3W)`, and the
//! Zeeman term mixes only the `m = 0` triplet `φ₂` with the singlet `φ₄`.
//!
//! Units: energies in eV, time in s, field in T. `μ_e` is used as a positive
//! magnitude; the physical electron moment is negative, which only relabels
//! the `m = ±1` levels.

use num_complex::Complex64;
use thiserror::Error;

use crate::perturb::{self, ImprovedSpectrum, PerturbError, PerturbationProblem, RedividedProblem};
use crate::specmath::{self, HermitianMatrix, SpectralDecomposition, StateVector};

/// Zero-based index of `φ₁ = αα`.
pub const PHI1: usize = 0;
/// Zero-based index of `φ₂ = (αβ + βα)/√2`.
pub const PHI2: usize = 1;
/// Zero-based index of `φ₃ = ββ`.
pub const PHI3: usize = 2;
/// Zero-based index of `φ₄ = (αβ − βα)/√2`.
pub const PHI4: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperfineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
}

pub type Result<T> = std::result::Result<T, HyperfineError>;

/// SI inputs and the eV-based quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Electron magnetic moment magnitude, J/T.
    pub mu_e: f64,
    /// Ground-state hyperfine frequency, Hz.
    pub delta_nu_h: f64,
    /// Planck constant, J·s.
    pub planck_h: f64,
    /// Elementary charge, C.
    pub elementary_charge: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mu_e: 9.28476412e-24,
            delta_nu_h: 1.4204057517667e9,
            planck_h: 6.6260693e-34,
            elementary_charge: 1.60217653e-19,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [self.mu_e, self.delta_nu_h, self.planck_h, self.elementary_charge];
        if all.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(())
        } else {
            Err(HyperfineError::InvalidConfig("physical constants must be positive and finite"))
        }
    }

    /// `ħ = h / (2π e)` in eV·s.
    pub fn hbar_evs(&self) -> f64 {
        self.planck_h / (2.0 * std::f64::consts::PI * self.elementary_charge)
    }

    /// `μ_e / e` in eV/T.
    pub fn mu_e_ev_per_tesla(&self) -> f64 {
        self.mu_e / self.elementary_charge
    }

    /// Contact coupling `W = h Δν_H / 4`, in eV.
    pub fn w_ev(&self) -> f64 {
        self.planck_h * self.delta_nu_h / (4.0 * self.elementary_charge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperfineConfig {
    pub constants: PhysicalConstants,
    /// Field magnitude in T.
    pub b_field: f64,
}

impl HyperfineConfig {
    pub fn new(constants: PhysicalConstants, b_field: f64) -> Result<Self> {
        constants.validate()?;
        if !b_field.is_finite() || b_field < 0.0 {
            return Err(HyperfineError::InvalidConfig("magnetic field must be finite and non-negative"));
        }
        Ok(Self { constants, b_field })
    }

    /// Default constants at field `b_field`.
    pub fn with_field(b_field: f64) -> Result<Self> {
        Self::new(PhysicalConstants::default(), b_field)
    }

    pub fn w(&self) -> f64 {
        self.constants.w_ev()
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar_evs()
    }

    /// Zeeman energy `B μ_e` in eV.
    pub fn zeeman(&self) -> f64 {
        self.b_field * self.constants.mu_e_ev_per_tesla()
    }

    /// `μ_e B < W / 10`
    pub fn is_perturbative(&self) -> bool {
        self.zeeman() < 0.1 * self.w()
    }

    /// `(μ_e B)² / 4W²`
    pub fn mixing_ratio(&self) -> f64 {
        let (w, z) = (self.w(), self.zeeman());
        z * z / (4.0 * w * w)
    }
}

/// The four coupled spin states in the product basis `{αα, αβ, βα, ββ}`
/// (electron first).
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledBasis {
    states: [StateVector; 4],
}

impl Default for CoupledBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl CoupledBasis {
    pub fn new() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            states: [
                StateVector::from_real(&[1.0, 0.0, 0.0, 0.0]),
                StateVector::from_real(&[0.0, r, r, 0.0]),
                StateVector::from_real(&[0.0, 0.0, 0.0, 1.0]),
                StateVector::from_real(&[0.0, r, -r, 0.0]),
            ],
        }
    }

    pub fn states(&self) -> &[StateVector; 4] {
        &self.states
    }

    /// `⟨φ_i|M|φ_j⟩` for a product-basis operator.
    pub fn represent(&self, m: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::from_fn(4, |i, j| {
            specmath::matrix_element(&self.states[i], m, &self.states[j]).expect("4x4 operator")
        })
        .expect("unitary transform of a Hermitian operator")
    }
}

type Mat2 = [[Complex64; 2]; 2];

fn pauli() -> [Mat2; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [[[o, one], [one, o]], [[o, -i], [i, o]], [[one, o], [o, -one]]]
}

fn identity2() -> Mat2 {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [[one, o], [o, one]]
}

/// `a ⊗ b` as a flat row-major 4×4.
fn kron(a: &Mat2, b: &Mat2) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 16];
    for (i, j, k, l) in kron_indices() {
        out[(2 * i + k) * 4 + (2 * j + l)] = a[i][j] * b[k][l];
    }
    out
}

fn kron_indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|n| ((n >> 3) & 1, (n >> 2) & 1, (n >> 1) & 1, n & 1))
}

/// `σ_e·σ_p` in the product basis.
pub fn spin_contact_operator() -> HermitianMatrix {
    let s = pauli();
    let mut sum = vec![Complex64::new(0.0, 0.0); 16];
    for sigma in &s {
        for (acc, x) in sum.iter_mut().zip(kron(sigma, sigma)) {
            *acc += x;
        }
    }
    HermitianMatrix::new(4, sum).expect("σ·σ is Hermitian")
}

/// `σ_ez ⊗ 1` in the product basis.
pub fn electron_sigma_z() -> HermitianMatrix {
    HermitianMatrix::new(4, kron(&pauli()[2], &identity2())).expect("σz ⊗ 1 is Hermitian")
}

/// Builds `E = (W, W, W, −3W)` and `H₁ = B μ_e σ_ez` in the coupled basis
/// from the spin operators, rather than from the known closed forms.
pub fn build_problem(cfg: &HyperfineConfig) -> PerturbationProblem {
    let basis = CoupledBasis::new();
    let contact = basis.represent(&spin_contact_operator());
    let sigma_z = basis.represent(&electron_sigma_z());
    let w = cfg.w();
    let e0: Vec<f64> = contact.diagonal_values().iter().map(|x| x * w).collect();
    let h1 = sigma_z.scaled(cfg.zeeman());
    PerturbationProblem::new(e0, h1).expect("4-level problem with finite entries")
}

/// Closed-form exact eigensystem, labelled like the coupled states it grows out of.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEigensystem {
    pub energies: [f64; 4],
    /// Eigenvectors in coupled-basis coordinates, largest component real positive.
    pub states: [StateVector; 4],
}

pub fn exact_eigensystem_closed_form(cfg: &HyperfineConfig) -> ExactEigensystem {
    let (w, z) = (cfg.w(), cfg.zeeman());
    let root = (4.0 * w * w + z * z).sqrt();
    let energies = [w + z, -w + root, w - z, -w - root];

    let omega42 = -4.0 * w;
    let omega42_exact = energies[PHI4] - energies[PHI2];
    let mix = |a: f64, fallback: usize| {
        let b = -2.0 * z;
        let n = (a * a + b * b).sqrt();
        if n == 0.0 {
            return StateVector::basis(4, fallback);
        }
        let mut amps = [0.0; 4];
        amps[PHI2] = a / n;
        amps[PHI4] = b / n;
        // largest component real positive, as in the numeric decomposition
        let lead = if amps[PHI2].abs() >= amps[PHI4].abs() { amps[PHI2] } else { amps[PHI4] };
        if lead < 0.0 {
            amps.iter_mut().for_each(|x| *x = -*x);
        }
        StateVector::from_real(&amps)
    };
    let states = [
        StateVector::basis(4, PHI1),
        mix(omega42 + omega42_exact, PHI2),
        StateVector::basis(4, PHI3),
        mix(omega42 - omega42_exact, PHI4),
    ];
    ExactEigensystem { energies, states }
}

/// `Ẽ₁..Ẽ₄` through fourth order, evaluated directly.
pub fn improved_energies_closed_form(cfg: &HyperfineConfig) -> [f64; 4] {
    let (w, z) = (cfg.w(), cfg.zeeman());
    let second = z * z / (4.0 * w);
    let fourth = z.powi(4) / (4.0 * w).powi(3);
    [w + z, w + second - fourth, w - z, -3.0 * w - second + fourth]
}

/// Angular rates (s⁻¹) multiplying `t` inside the three normalized `sin²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularRates {
    pub exact: f64,
    pub improved: f64,
    pub traditional: f64,
}

pub fn angular_rates(cfg: &HyperfineConfig) -> AngularRates {
    let (w, z, hbar) = (cfg.w(), cfg.zeeman(), cfg.hbar());
    AngularRates {
        exact: (4.0 * w * w + z * z).sqrt() / hbar,
        improved: (2.0 * w + z * z / (4.0 * w) - z.powi(4) / (4.0 * w).powi(3)) / hbar,
        traditional: 2.0 * w / hbar,
    }
}

/// The three `2 → 4` probabilities scaled by `(ω₄₂/2)² / (μ_e B)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedProbabilities {
    pub exact: f64,
    pub improved: f64,
    pub traditional: f64,
}

pub fn normalized_probabilities(cfg: &HyperfineConfig, t: f64) -> NormalizedProbabilities {
    let rates = angular_rates(cfg);
    NormalizedProbabilities {
        exact: (rates.exact * t).sin().powi(2) / (1.0 + cfg.mixing_ratio()),
        improved: (rates.improved * t).sin().powi(2),
        traditional: (rates.traditional * t).sin().powi(2),
    }
}

/// `(ω₄₂/2)² / (μ_e B)² = 4W² / (μ_e B)²`; infinite at zero field.
pub fn normalization_factor(cfg: &HyperfineConfig) -> f64 {
    let (w, z) = (cfg.w(), cfg.zeeman());
    4.0 * w * w / (z * z)
}

/// Unnormalized `2 → 4` probabilities from the closed forms.
pub fn raw_probabilities(cfg: &HyperfineConfig, t: f64) -> NormalizedProbabilities {
    let (w, z, hbar) = (cfg.w(), cfg.zeeman(), cfg.hbar());
    let omega = -4.0 * w;
    let omega_exact = -2.0 * (4.0 * w * w + z * z).sqrt();
    let improved = improved_energies_closed_form(cfg);
    let omega_improved = improved[PHI4] - improved[PHI2];
    let sin2 = |x: f64| x.sin().powi(2);
    NormalizedProbabilities {
        exact: z * z * sin2(omega_exact * t / (2.0 * hbar)) / (omega_exact / 2.0).powi(2),
        improved: z * z * sin2(omega_improved * t / (2.0 * hbar)) / (omega / 2.0).powi(2),
        traditional: z * z * sin2(omega * t / (2.0 * hbar)) / (omega / 2.0).powi(2),
    }
}

/// Coefficients of the field-sweep phases at a fixed time `t`.
///
/// Improved phase: `c0 + c2·B² + c4·B⁴`. Exact phase: `√(a0 + a2·B²)`, with
/// amplitude `1 / (1 + r·B²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSweepCoefficients {
    pub improved: [f64; 3],
    pub exact_radicand: [f64; 2],
    pub exact_amplitude_b2: f64,
}

pub fn field_sweep_coefficients(constants: &PhysicalConstants, t: f64) -> FieldSweepCoefficients {
    let w = constants.w_ev();
    let mu = constants.mu_e_ev_per_tesla();
    let hbar = constants.hbar_evs();
    FieldSweepCoefficients {
        improved: [2.0 * w * t / hbar, mu * mu * t / (4.0 * w * hbar), -mu.powi(4) * t / ((4.0 * w).powi(3) * hbar)],
        exact_radicand: [(2.0 * w * t / hbar).powi(2), (mu * t / hbar).powi(2)],
        exact_amplitude_b2: mu * mu / (4.0 * w * w),
    }
}

/// The general perturbation engine applied to the hyperfine problem at one field.
#[derive(Debug, Clone)]
pub struct HyperfineEngine {
    cfg: HyperfineConfig,
    problem: PerturbationProblem,
    redivided: RedividedProblem,
    spectrum: ImprovedSpectrum,
    decomposition: SpectralDecomposition,
}

impl HyperfineEngine {
    pub fn new(cfg: &HyperfineConfig) -> Result<Self> {
        let problem = build_problem(cfg);
        let redivided = perturb::redivide(&problem);
        let spectrum = perturb::improved_energies(&redivided, perturb::DEFAULT_ORDER)?;
        let decomposition = specmath::eigendecompose(&problem.full_hamiltonian()).map_err(PerturbError::from)?;
        Ok(Self { cfg: *cfg, problem, redivided, spectrum, decomposition })
    }

    pub fn problem(&self) -> &PerturbationProblem {
        &self.problem
    }

    pub fn redivided(&self) -> &RedividedProblem {
        &self.redivided
    }

    pub fn spectrum(&self) -> &ImprovedSpectrum {
        &self.spectrum
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Raw `2 → 4` probabilities from the engine.
    pub fn raw_probabilities(&self, t: f64) -> Result<NormalizedProbabilities> {
        let hbar = self.cfg.hbar();
        let exact = perturb::transition_probability_from_decomposition(&self.decomposition, PHI4, PHI2, t, hbar)?;
        let improved =
            perturb::transition_probability_improved(&self.redivided, &self.spectrum, PHI4, PHI2, t, hbar)?;
        let traditional = perturb::transition_probability_traditional(&self.redivided, PHI4, PHI2, t, hbar)?;
        Ok(NormalizedProbabilities {
            exact: exact.probability,
            improved: improved.probability,
            traditional: traditional.probability,
        })
    }

    /// Engine angular rates `|ω| / 2ħ` for the `2 → 4` transition.
    pub fn angular_rates(&self) -> Result<AngularRates> {
        let hbar = self.cfg.hbar();
        let exact = perturb::transition_probability_from_decomposition(&self.decomposition, PHI4, PHI2, 1.0, hbar)?;
        let improved =
            perturb::transition_probability_improved(&self.redivided, &self.spectrum, PHI4, PHI2, 1.0, hbar)?;
        let traditional = perturb::transition_probability_traditional(&self.redivided, PHI4, PHI2, 1.0, hbar)?;
        Ok(AngularRates {
            exact: exact.angular_argument.abs(),
            improved: improved.angular_argument.abs(),
            traditional: traditional.angular_argument.abs(),
        })
    }
}
