//! Conditioning of the gap function, iteration-count predictions, and the
//! per-iteration arithmetic cost of each method.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method::{Method, RateFamily};
use crate::model::RidgeProblem;
use crate::spectral::{theta_bar, SpectralInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `λn ≥ 1`
    LambdaNGeq1,
    /// `λn < 1`
    LambdaNLt1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    DLtN,
    DEqN,
    DGtN,
}

/// Extreme eigenvalues of the (constant) Hessian of the gap,
/// `∇²f = (1/n)·blockdiag(AAᵀ + λnI, AᵀA/λn + I)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditioningReport {
    pub l_smooth: f64,
    pub mu: f64,
    pub kappa: f64,
    pub regime: Regime,
    pub shape: Shape,
}

/// Proportionality constants of the iteration counts at optimal relaxation:
/// `1/(2θ₁*)`, `1/θ₂*` and `1/(2θ₃*)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityFactors {
    pub separable: f64,
    pub coupled: f64,
    pub gauss_seidel: f64,
    /// Set outside the `λn ≥ 1, d < N` regime, where `κ = σ₁² + λn` no longer
    /// equals the Hessian condition number.
    pub regime_warning: bool,
}

impl ComplexityFactors {
    pub fn for_family(&self, family: RateFamily) -> f64 {
        match family {
            RateFamily::Separable => self.separable,
            RateFamily::Coupled => self.coupled,
            RateFamily::GaussSeidel => self.gauss_seidel,
        }
    }
}

/// Predicted iteration count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IterationBound {
    Finite(u64),
    /// The rate is not below one.
    Unbounded,
}

impl IterationBound {
    pub fn finite(self) -> Option<u64> {
        match self {
            IterationBound::Finite(k) => Some(k),
            IterationBound::Unbounded => None,
        }
    }
}

pub fn regime_of(lambda_n: f64) -> Regime {
    if lambda_n >= 1.0 {
        Regime::LambdaNGeq1
    } else {
        Regime::LambdaNLt1
    }
}

pub fn shape_of(d: usize, big_n: usize) -> Shape {
    match d.cmp(&big_n) {
        std::cmp::Ordering::Less => Shape::DLtN,
        std::cmp::Ordering::Equal => Shape::DEqN,
        std::cmp::Ordering::Greater => Shape::DGtN,
    }
}

/// `L`, `μ` and `κ = L/μ` of the gap Hessian, by case on `λn` and the shape
/// of `A`.
///
/// `σ_min` below is the `min(d, N)`-th singular value, zero when `A` is rank
/// deficient.
pub fn conditioning(p: &RidgeProblem, s: &SpectralInfo) -> ConditioningReport {
    let n = p.n() as f64;
    let lambda = p.lambda();
    let lambda_n = s.lambda_n();
    let s1_sq = s.sigma1().powi(2);
    let full_rank = s.rank() == s.d().min(s.big_n());
    let smin_sq = if full_rank {
        s.sigma().last().copied().unwrap_or(0.0).powi(2)
    } else {
        0.0
    };
    let regime = regime_of(lambda_n);
    let shape = shape_of(s.d(), s.big_n());

    let (l_smooth, mu) = match regime {
        Regime::LambdaNGeq1 => {
            let l = (s1_sq + lambda_n) / n;
            let mu = match shape {
                Shape::DLtN => 1.0 / n,
                Shape::DEqN => smin_sq / (lambda_n * n) + 1.0 / n,
                Shape::DGtN => lambda.min(smin_sq / (lambda_n * n) + 1.0 / n),
            };
            (l, mu)
        }
        Regime::LambdaNLt1 => {
            let l = (s1_sq + lambda_n) / (lambda_n * n);
            let mu = match shape {
                Shape::DLtN => (smin_sq / n + lambda).min(1.0 / n),
                Shape::DEqN => smin_sq / n + lambda,
                Shape::DGtN => lambda,
            };
            (l, mu)
        }
    };
    ConditioningReport {
        l_smooth,
        mu,
        kappa: l_smooth / mu,
        regime,
        shape,
    }
}

/// Smallest `k` with `k > (−1/(2 ln ρ))·ln(dist0²·L/(2ε))`, which guarantees
/// `f(xᵏ) ≤ ε` when `‖xᵏ − x*‖ ≤ ρᵏ‖x⁰ − x*‖`.
pub fn iterations_to_eps(rho: f64, l_smooth: f64, dist0: f64, eps: f64) -> Result<IterationBound> {
    let negative_or_nan = |v: f64| v.is_nan() || v < 0.0;
    if eps.is_nan() || eps <= 0.0 || negative_or_nan(rho) || negative_or_nan(l_smooth) || negative_or_nan(dist0) {
        return Err(Error::InvalidArgument(format!(
            "iterations_to_eps needs rho, L, dist0 >= 0 and eps > 0 (got {rho}, {l_smooth}, {dist0}, {eps})"
        )));
    }
    if rho >= 1.0 {
        return Ok(IterationBound::Unbounded);
    }
    let log_arg = (dist0 * dist0 * l_smooth / (2.0 * eps)).ln();
    if log_arg <= 0.0 {
        return Ok(IterationBound::Finite(0));
    }
    if rho == 0.0 {
        return Ok(IterationBound::Finite(1));
    }
    let bound = -log_arg / (2.0 * rho.ln());
    Ok(IterationBound::Finite(bound.floor() as u64 + 1))
}

/// Iteration-count factors in terms of `κ = σ₁² + λn`:
/// `(κ + λn)/(4λn)`, `κ/λn`, and `1/(2θ̄₁) = (1 + √(κ/λn))/4`.
pub fn complexity_factors(s: &SpectralInfo) -> ComplexityFactors {
    let lambda_n = s.lambda_n();
    let kappa = s.sigma1().powi(2) + lambda_n;
    ComplexityFactors {
        separable: (kappa + lambda_n) / (4.0 * lambda_n),
        coupled: kappa / lambda_n,
        gauss_seidel: 1.0 / (2.0 * theta_bar(s.sigma1(), lambda_n)),
        regime_warning: !(lambda_n >= 1.0 && s.d() < s.big_n()),
    }
}

/// Arithmetic operations per iteration for dense `A ∈ ℝ^{d×N}`.
///
/// | method | cost |
/// |---|---|
/// | pdfp1 | `10dN + 5d + 9N` |
/// | pdfp2, qtz, nqtz | `6dN + 5d + 9N` |
/// | mqtz | `6dN + 3d + 9N` |
/// | cg | `4d² + 4N² + 4dN + 14d + 17N` |
///
/// No count is tabulated for `mqtz2`.
pub fn cost_per_iteration(method: Method, d: u64, big_n: u64) -> Result<u64> {
    if d == 0 || big_n == 0 {
        return Err(Error::InvalidArgument("cost model needs d, N >= 1".into()));
    }
    let dn = d * big_n;
    match method {
        Method::Pdfp1 => Ok(10 * dn + 5 * d + 9 * big_n),
        Method::Pdfp2 | Method::Qtz | Method::Nqtz => Ok(6 * dn + 5 * d + 9 * big_n),
        Method::Mqtz => Ok(6 * dn + 3 * d + 9 * big_n),
        Method::Cg => Ok(4 * d * d + 4 * big_n * big_n + 4 * dn + 14 * d + 17 * big_n),
        Method::Mqtz2 => Err(Error::UnknownCost(method.to_string())),
    }
}
