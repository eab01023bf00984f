//! Relaxed primal-dual fixed-point solvers for ridge regression.
//!
//! The crate covers the ridge primal, dual and duality-gap objectives
//! ([`model`]), closed-form spectra and optimal relaxation of the
//! fixed-point iterations ([`spectral`]), the iterations themselves plus a
//! conjugate-gradient baseline ([`solvers`]), conditioning and cost
//! predictions ([`complexity`]), and file formats ([`io`]). Dense linear
//! algebra, including the eigenvalue and SVD oracles used for verification,
//! lives in [`linalg`].
//!
//! ```
//! use ridgefp::{solve, Matrix, Method, RidgeProblem, SolverConfig, Status};
//!
//! let a = Matrix::diag(&[1.0, 2.0]);
//! let p = RidgeProblem::new(a, vec![1.0, 1.0], 0.5, 2, 1).unwrap();
//! let res = solve(&p, &SolverConfig::new(Method::Qtz), &p.zero_point()).unwrap();
//! assert_eq!(res.status, Status::Converged);
//! assert!((res.x.w[0] - 0.5).abs() < 1e-5);
//! ```

pub mod complexity;
pub mod error;
pub mod io;
pub mod linalg;
pub mod method;
pub mod model;
pub mod solvers;
pub mod spectral;

pub use complexity::{
    complexity_factors, conditioning, cost_per_iteration, iterations_to_eps, ComplexityFactors, ConditioningReport,
    IterationBound, Regime, Shape,
};
pub use error::{Error, Result};
pub use io::{generate_problem, load_problem, write_problem, write_trace, Distribution, GeneratorSpec, MethodReport};
pub use linalg::{eigenvalues_dense, ComplexSpectrum, Matrix};
pub use method::{Method, RateFamily};
pub use model::{OptimalitySystem, PrimalDualPoint, RidgeProblem, SystemKind};
pub use solvers::{
    solve, solve_with_reference, ConvergenceTrace, SigmaSource, SolveResult, SolverConfig, Status, ThetaChoice,
    TolMetric, TraceRecord,
};
pub use spectral::{rate_report, theta_thresholds, RateReport, SpectralInfo, ThetaThresholds};
