//! Improved-scheme perturbation theory for small Hermitian problems, with the
//! hydrogen ground-state hyperfine atom in a magnetic field as a worked case.
//!
//! * [`specmath`]: Hermitian matrices, Jacobi eigendecomposition, time evolution.
//! * [`perturb`]: redivision, `G⁽²⁾..G⁽⁴⁾` corrections, transition probabilities.
//! * [`hyperfine`]: the 4-level hyperfine + Zeeman problem and its closed forms.
//! * [`cli`]: sweeps, divergence reports and CSV output used by the `perturba` binary.

pub mod cli;
pub mod hyperfine;
pub mod perturb;
pub mod specmath;
