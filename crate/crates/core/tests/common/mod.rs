#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use perturba::perturb::PerturbationProblem;
use perturba::specmath::{HermitianMatrix, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> HermitianMatrix {
    let mut entries = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = c(scale * rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            entries[i * dim + j] = z;
            entries[j * dim + i] = z.conj();
        }
    }
    HermitianMatrix::new(dim, entries).unwrap()
}

pub fn random_real_problem(rng: &mut ChaCha8Rng, dim: usize, coupling: f64) -> PerturbationProblem {
    let p = random_problem(rng, dim, coupling);
    let h1 = HermitianMatrix::from_fn(dim, |i, j| c(p.h1().get(i, j).re, 0.0)).unwrap();
    PerturbationProblem::new(p.e0().to_vec(), h1).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    StateVector::new((0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).normalized()
}

/// Levels spaced 1..2 apart with a complex coupling of the given size.
pub fn random_problem(rng: &mut ChaCha8Rng, dim: usize, coupling: f64) -> PerturbationProblem {
    let mut e0 = Vec::with_capacity(dim);
    let mut level = rng.gen_range(-3.0..-2.0);
    for _ in 0..dim {
        e0.push(level);
        level += rng.gen_range(1.0..2.0);
    }
    PerturbationProblem::new(e0, random_hermitian(rng, dim, coupling)).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
