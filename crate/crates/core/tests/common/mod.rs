#![allow(dead_code)]

use std::path::PathBuf;

use ridgefp::{generate_problem, GeneratorSpec, Matrix, PrimalDualPoint, RidgeProblem};

/// `A = diag(1, 2)`, `y = (1, 1)`, `λ = 1/2`, `n = 2`, `m = 1`, so `λn = 1`
/// and `σ = (2, 1)`.
pub fn worked() -> RidgeProblem {
    RidgeProblem::new(Matrix::diag(&[1.0, 2.0]), vec![1.0, 1.0], 0.5, 2, 1).unwrap()
}

pub fn worked_solution() -> PrimalDualPoint {
    PrimalDualPoint {
        w: vec![0.5, 0.4],
        alpha: vec![0.5, 0.2],
    }
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Standard normal data with `λ = 1/n`, `m = 1`.
pub fn seeded(seed: u64, d: usize, n: usize) -> RidgeProblem {
    generate_problem(&GeneratorSpec::new(d, n, 1, seed)).unwrap()
}

pub fn seeded_with_lambda(seed: u64, d: usize, n: usize, lambda: f64) -> RidgeProblem {
    generate_problem(&GeneratorSpec::new(d, n, 1, seed).with_lambda(lambda)).unwrap()
}

/// A random point with standard normal entries.
pub fn random_point(p: &RidgeProblem, seed: u64) -> PrimalDualPoint {
    let mut rng = ridgefp::io::SplitMix64::new(seed);
    PrimalDualPoint {
        w: (0..p.d()).map(|_| rng.next_standard_normal()).collect(),
        alpha: (0..p.big_n()).map(|_| rng.next_standard_normal()).collect(),
    }
}
