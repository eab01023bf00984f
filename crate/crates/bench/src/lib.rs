//! Shared inputs for the criterion benchmarks under `benches/`.

use ridgefp::{generate_problem, GeneratorSpec, PrimalDualPoint, RidgeProblem};

/// Seeded problem with standard normal data and `λ = 1/n`.
pub fn problem(d: usize, n: usize, seed: u64) -> RidgeProblem {
    generate_problem(&GeneratorSpec::new(d, n, 1, seed)).expect("valid generator spec")
}

/// Deterministic non-zero starting point.
pub fn start_point(p: &RidgeProblem) -> PrimalDualPoint {
    let w = (0..p.d()).map(|i| 1.0 / (1.0 + i as f64)).collect();
    let alpha = (0..p.big_n()).map(|i| ((i % 7) as f64 - 3.0) / 7.0).collect();
    PrimalDualPoint { w, alpha }
}
