//! Relaxed fixed-point solvers and the CG baseline.

mod cg;
mod steps;

use serde::{Deserialize, Serialize};

pub use steps::{
    probe_iteration_matrix, step, step_generic, step_mqtz, step_mqtz2, step_nqtz, step_pdfp1, step_pdfp2,
    step_qtz, two_step_equivalence_check,
};

use crate::error::{Error, Result};
use crate::linalg::{power_iteration_sigma1, singular_values};
use crate::method::Method;
use crate::model::{PrimalDualPoint, RidgeProblem};
use crate::spectral::optimal_theta;

/// Iterates whose norm exceeds this are declared divergent.
pub const DIVERGENCE_NORM: f64 = 1e12;

const POWER_TOL: f64 = 1e-13;
const POWER_MAX_ITER: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaChoice {
    Explicit(f64),
    /// The method's rate-minimizing relaxation.
    Optimal,
    /// `θ = 1`.
    Pure,
}

/// Where `σ₁` comes from when an optimal `θ` is requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaSource {
    /// Power iteration, falling back to the SVD if it stalls.
    PowerIteration,
    ExactSvd,
    Known(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TolMetric {
    /// Duality gap `f(x)`, zero exactly at the solution.
    GapValue,
    /// Step length `‖xᵏ⁺¹ − xᵏ‖`.
    IterateResidual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Converged,
    MaxIter,
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub theta: ThetaChoice,
    pub max_iter: usize,
    pub tol: f64,
    pub tol_metric: TolMetric,
    pub record_trace: bool,
    pub sigma_source: SigmaSource,
}

impl SolverConfig {
    /// Optimal `θ`, gap tolerance `1e-10`, at most 100 000 iterations, no trace.
    pub fn new(method: Method) -> Self {
        Self {
            method,
            theta: ThetaChoice::Optimal,
            max_iter: 100_000,
            tol: 1e-10,
            tol_metric: TolMetric::GapValue,
            record_trace: false,
            sigma_source: SigmaSource::PowerIteration,
        }
    }

    pub fn theta(mut self, theta: ThetaChoice) -> Self {
        self.theta = theta;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol_metric(mut self, metric: TolMetric) -> Self {
        self.tol_metric = metric;
        self
    }

    pub fn record_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn sigma_source(mut self, source: SigmaSource) -> Self {
        self.sigma_source = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if let ThetaChoice::Explicit(t) = self.theta {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("theta must be positive, got {t}")));
            }
        }
        if let SigmaSource::Known(s) = self.sigma_source {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!("sigma must be non-negative, got {s}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub gap: f64,
    /// `‖xᵏ − x*‖`, present when a reference solution was supplied.
    pub dist: Option<f64>,
    pub step_residual: f64,
    /// `(rₖ / r_{⌊k/2⌋})^{1/(k − ⌊k/2⌋)}` over step residuals `r`; absent for `k < 2`.
    pub rate_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub x: PrimalDualPoint,
    pub iterations: usize,
    pub status: Status,
    pub trace: Option<ConvergenceTrace>,
    /// Relaxation actually used; `None` for CG.
    pub theta_used: Option<f64>,
}

impl SolveResult {
    /// Rate estimate from the last trace record, if any.
    pub fn empirical_rate(&self) -> Option<f64> {
        self.trace.as_ref()?.records.last()?.rate_estimate
    }
}

/// Largest singular value of the problem's data matrix.
pub fn resolve_sigma1(p: &RidgeProblem, source: SigmaSource) -> Result<f64> {
    let exact = || singular_values(p.a()).map(|s| s.first().copied().unwrap_or(0.0));
    match source {
        SigmaSource::Known(s) => Ok(s),
        SigmaSource::ExactSvd => exact(),
        SigmaSource::PowerIteration => {
            if p.a().max_abs() == 0.0 {
                return Ok(0.0);
            }
            match power_iteration_sigma1(p.a(), POWER_TOL, POWER_MAX_ITER) {
                Ok(est) if est.converged => Ok(est.sigma),
                _ => exact(),
            }
        }
    }
}

/// The relaxation value a configuration implies; `None` for CG.
pub fn resolve_theta(p: &RidgeProblem, method: Method, choice: ThetaChoice, source: SigmaSource) -> Result<Option<f64>> {
    let Some(family) = method.rate_family() else {
        return Ok(None);
    };
    Ok(Some(match choice {
        ThetaChoice::Explicit(t) => t,
        ThetaChoice::Pure => 1.0,
        ThetaChoice::Optimal => optimal_theta(family, resolve_sigma1(p, source)?, p.lambda_n()),
    }))
}

pub fn solve(p: &RidgeProblem, cfg: &SolverConfig, x0: &PrimalDualPoint) -> Result<SolveResult> {
    solve_with_reference(p, cfg, x0, None)
}

/// Like [`solve`], additionally recording `‖xᵏ − x*‖` in the trace when a
/// reference solution is given.
pub fn solve_with_reference(
    p: &RidgeProblem,
    cfg: &SolverConfig,
    x0: &PrimalDualPoint,
    reference: Option<&PrimalDualPoint>,
) -> Result<SolveResult> {
    cfg.validate()?;
    p.check_point(x0)?;
    if let Some(r) = reference {
        p.check_point(r)?;
    }
    let theta_used = resolve_theta(p, cfg.method, cfg.theta, cfg.sigma_source)?;

    let mut cg_state = match cfg.method {
        Method::Cg => Some(cg::CgState::new(p, x0)?),
        _ => None,
    };
    let mut tracker = Tracker::new(cfg, reference);
    let mut x = x0.clone();

    if cfg.tol_metric == TolMetric::GapValue && p.gap_value(&x)? <= cfg.tol {
        return Ok(tracker.finish(x, 0, Status::Converged, theta_used));
    }

    for k in 1..=cfg.max_iter {
        let next = match (&mut cg_state, theta_used) {
            (Some(state), _) => state.advance(p)?,
            (None, Some(theta)) => step(cfg.method, p, &x, theta)?,
            (None, None) => unreachable!("fixed-point methods always resolve a theta"),
        };
        let step_residual = next.distance(&x);
        x = next;
        if !x.is_finite() || x.norm() > DIVERGENCE_NORM {
            return Ok(tracker.finish(x, k, Status::Diverged, theta_used));
        }
        let gap = p.gap_value(&x)?;
        tracker.record(k, gap, step_residual, &x);
        let metric = match cfg.tol_metric {
            TolMetric::GapValue => gap,
            TolMetric::IterateResidual => step_residual,
        };
        if metric <= cfg.tol || cg_state.as_ref().is_some_and(cg::CgState::is_stationary) {
            return Ok(tracker.finish(x, k, Status::Converged, theta_used));
        }
    }
    Ok(tracker.finish(x, cfg.max_iter, Status::MaxIter, theta_used))
}

/// Accumulates step residuals (for the rate estimate) and trace records.
struct Tracker<'a> {
    record_trace: bool,
    reference: Option<&'a PrimalDualPoint>,
    residuals: Vec<f64>,
    records: Vec<TraceRecord>,
}

impl<'a> Tracker<'a> {
    fn new(cfg: &SolverConfig, reference: Option<&'a PrimalDualPoint>) -> Self {
        Self {
            record_trace: cfg.record_trace,
            reference,
            residuals: Vec::new(),
            records: Vec::new(),
        }
    }

    fn record(&mut self, k: usize, gap: f64, step_residual: f64, x: &PrimalDualPoint) {
        if !self.record_trace {
            return;
        }
        self.residuals.push(step_residual);
        let half = k / 2;
        let rate_estimate = (half >= 1).then(|| {
            let earlier = self.residuals[half - 1];
            (step_residual / earlier).powf(1.0 / (k - half) as f64)
        });
        self.records.push(TraceRecord {
            k,
            gap,
            dist: self.reference.map(|r| x.distance(r)),
            step_residual,
            rate_estimate,
        });
    }

    fn finish(self, x: PrimalDualPoint, iterations: usize, status: Status, theta_used: Option<f64>) -> SolveResult {
        let trace = self.record_trace.then_some(ConvergenceTrace {
            records: self.records,
            status,
        });
        SolveResult {
            x,
            iterations,
            status,
            trace,
            theta_used,
        }
    }
}
