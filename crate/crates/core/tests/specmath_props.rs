mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{c, random_hermitian, random_state};
use perturba::hyperfine::{self, HyperfineConfig, PhysicalConstants};
use perturba::specmath::{self, HermitianMatrix, SpecMathError, StateVector};

fn mat_vec(dim: usize, m: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    (0..dim).map(|i| (0..dim).map(|j| m[i * dim + j] * v[j]).sum()).collect()
}

fn mat_mul(dim: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

/// exp(-iHt/hbar) by a 12th-order Taylor series with scaling and squaring.
fn taylor_propagator(h: &HermitianMatrix, t: f64, hbar: f64) -> Vec<Complex64> {
    let dim = h.dim();
    let norm = h.frobenius_norm() * t.abs() / hbar;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let factor = c(0.0, -t / hbar / f64::from(1u32 << squarings));
    let a: Vec<Complex64> = h.entries().iter().map(|&z| z * factor).collect();

    let mut result = vec![c(0.0, 0.0); dim * dim];
    let mut term = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        result[i * dim + i] = c(1.0, 0.0);
        term[i * dim + i] = c(1.0, 0.0);
    }
    for k in 1..=12 {
        term = mat_mul(dim, &term, &a).into_iter().map(|z| z / k as f64).collect();
        result.iter_mut().zip(&term).for_each(|(r, t)| *r += t);
    }
    for _ in 0..squarings {
        result = mat_mul(dim, &result, &result);
    }
    result
}

#[test]
fn reconstruction_of_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in 1..=8 {
        for _ in 0..25 {
            let h = random_hermitian(&mut rng, dim, 1.0);
            let dec = specmath::eigendecompose(&h).unwrap();
            let worst = dec
                .reconstruct()
                .iter()
                .zip(h.entries())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-12 * h.max_abs(), "dim {dim}: {worst:e}");
        }
    }
}

#[test]
fn eigenpairs_are_orthonormal_and_sorted() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for dim in 2..=8 {
        let h = random_hermitian(&mut rng, dim, 3.0);
        let dec = specmath::eigendecompose(&h).unwrap();
        assert!(dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let vs = dec.eigenvectors();
        for (k, v) in vs.iter().enumerate() {
            let hv = h.apply(v).unwrap();
            let residual = hv.max_abs_diff(&v.scaled(c(dec.eigenvalues()[k], 0.0)));
            assert!(residual <= 1e-12 * h.frobenius_norm());
            for (l, u) in vs.iter().enumerate() {
                let expected = if k == l { 1.0 } else { 0.0 };
                assert!((v.inner(u).unwrap() - expected).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn largest_component_is_real_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let h = random_hermitian(&mut rng, 5, 1.0);
        for v in specmath::eigendecompose(&h).unwrap().eigenvectors() {
            let lead = v.amplitudes().iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            assert!(lead.re > 0.0 && lead.im.abs() <= 1e-14);
        }
    }
}

#[test]
fn trace_is_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for dim in 1..=8 {
        let h = random_hermitian(&mut rng, dim, 2.0);
        let sum: f64 = specmath::eigendecompose(&h).unwrap().eigenvalues().iter().sum();
        assert!((sum - h.trace()).abs() <= 1e-12 * h.frobenius_norm());
    }
}

#[test]
fn decomposition_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let h = random_hermitian(&mut rng, 6, 1.0);
    assert_eq!(specmath::eigendecompose(&h).unwrap(), specmath::eigendecompose(&h).unwrap());
}

#[test]
fn hyperfine_matrix_at_unit_w() {
    // W = h dnu / 4e = 1 and mu_e B = 0.1
    let constants = PhysicalConstants { mu_e: 0.1, delta_nu_h: 1.0, planck_h: 4.0, elementary_charge: 1.0 };
    let cfg = HyperfineConfig::new(constants, 1.0).unwrap();
    assert_eq!(cfg.w(), 1.0);
    let h = hyperfine::build_problem(&cfg).full_hamiltonian();
    let got = specmath::eigendecompose(&h).unwrap();
    let root = (4.0f64 + 0.01).sqrt();
    let expected = [-1.0 - root, 1.0 - 0.1, -1.0 + root, 1.0 + 0.1];
    for (g, e) in got.eigenvalues().iter().zip(expected) {
        assert!((g - e).abs() <= 1e-14, "{g} vs {e}");
    }
}

#[test]
fn evolution_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..1000 {
        let dim = rng.gen_range(1..=6);
        let scale = rng.gen_range(0.1..5.0);
        let h = random_hermitian(&mut rng, dim, scale);
        let psi = random_state(&mut rng, dim).scaled(c(rng.gen_range(0.5..2.0), 0.0));
        let t = rng.gen_range(-50.0..50.0);
        let dec = specmath::eigendecompose(&h).unwrap();
        let out = specmath::evolve(&dec, &psi, t, 1.0).unwrap();
        assert!((out.norm() - psi.norm()).abs() <= 1e-12);
    }
}

#[test]
fn evolution_matches_taylor_propagator() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for dim in [2, 3, 4, 4, 4, 5, 6] {
        let h = random_hermitian(&mut rng, dim, 1.0);
        let psi = random_state(&mut rng, dim);
        for (t, hbar) in [(1.0, 1.0), (0.3, 0.7), (4.0, 1.0)] {
            let u = taylor_propagator(&h, t, hbar);
            let expected = StateVector::new(mat_vec(dim, &u, psi.amplitudes()));
            let dec = specmath::eigendecompose(&h).unwrap();
            let got = specmath::evolve(&dec, &psi, t, hbar).unwrap();
            assert!(got.max_abs_diff(&expected) <= 1e-10, "dim {dim}, t {t}");
        }
    }
}

#[test]
fn eigenstates_only_pick_up_a_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let h = random_hermitian(&mut rng, 4, 1.0);
    let dec = specmath::eigendecompose(&h).unwrap();
    for v in dec.eigenvectors() {
        let out = specmath::evolve(&dec, &v, 2.5, 1.0).unwrap();
        assert!((v.inner(&out).unwrap().norm() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn evolution_rejects_mismatched_state() {
    let dec = specmath::eigendecompose(&HermitianMatrix::identity(3)).unwrap();
    let err = specmath::evolve(&dec, &StateVector::basis(2, 0), 1.0, 1.0).unwrap_err();
    assert!(matches!(err, SpecMathError::DimensionMismatch { .. }));
}

#[test]
fn matrix_elements_are_conjugate_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..200 {
        let dim = rng.gen_range(1..=6);
        let m = random_hermitian(&mut rng, dim, 1.0);
        let (a, b) = (random_state(&mut rng, dim), random_state(&mut rng, dim));
        let ab = specmath::matrix_element(&a, &m, &b).unwrap();
        let ba = specmath::matrix_element(&b, &m, &a).unwrap();
        assert!((ab - ba.conj()).norm() <= 1e-13);
    }
}

#[test]
fn rejects_non_hermitian_input() {
    let entries = vec![c(1.0, 0.0), c(0.5, 0.0), c(0.4, 0.0), c(2.0, 0.0)];
    assert!(matches!(HermitianMatrix::new(2, entries), Err(SpecMathError::NonHermitianInput { .. })));
}
