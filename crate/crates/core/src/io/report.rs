use serde::{Deserialize, Serialize};

use crate::complexity::{cost_per_iteration, ComplexityFactors};
use crate::method::Method;
use crate::model::RidgeProblem;
use crate::solvers::{SolveResult, Status};
use crate::spectral::rho;

/// Summary of one solver run, serialized as a flat JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub theta: Option<f64>,
    /// Spectral radius of the iteration matrix at `theta`.
    pub rho_theory: Option<f64>,
    /// Rate estimate from the last step residuals, when a trace was kept.
    pub rho_empirical: Option<f64>,
    pub iterations: usize,
    pub kappa: f64,
    pub factors: ComplexityFactors,
    pub cost_per_iter: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cost_total: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<Vec<f64>>,
}

impl MethodReport {
    /// Assembles a report from a finished run. `sigma1` is the largest
    /// singular value of the data, `kappa` the gap's condition number.
    pub fn from_run(
        p: &RidgeProblem,
        method: Method,
        result: &SolveResult,
        sigma1: f64,
        kappa: f64,
        factors: ComplexityFactors,
        include_solution: bool,
    ) -> Self {
        let rho_theory = match (method.rate_family(), result.theta_used) {
            (Some(family), Some(theta)) => Some(rho(family, sigma1, p.lambda_n(), theta)),
            _ => None,
        };
        let cost_per_iter = cost_per_iteration(method, p.d() as u64, p.big_n() as u64).ok();
        let final_gap = p.gap_value(&result.x).ok().filter(|g| g.is_finite());
        Self {
            method,
            theta: result.theta_used,
            rho_theory,
            rho_empirical: result.empirical_rate(),
            iterations: result.iterations,
            kappa,
            factors,
            cost_per_iter,
            status: Some(result.status),
            final_gap,
            cost_total: cost_per_iter.map(|c| c * result.iterations as u64),
            w: include_solution.then(|| result.x.w.clone()),
            alpha: include_solution.then(|| result.x.alpha.clone()),
        }
    }
}
