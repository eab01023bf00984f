//! Closed-form eigenvalues of the fixed-point iteration matrices, expressed
//! through the nonzero singular values `σ₁ ≥ … ≥ σ_p` of `A` and `λn`.
//!
//! With `x = (w, α) ∈ ℝ^{d+N}` the matrices are
//!
//! ```text
//! M₁ = −(1/λn)·blockdiag(AAᵀ, AᵀA)          M₂ = [[0, A/λn], [−Aᵀ, 0]]
//! G₁(θ) = (1−θ)I + θM₁                      G₂(θ) = (1−θ)I + θM₂
//! G₃(θ) = (1−θ)I + θ[[0, A/λn], [(θ−1)Aᵀ, −θAᵀA/λn]]
//! ```
//!
//! `G₃` is the iteration matrix of the Gauss-Seidel ordered scheme.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, singular_values, ComplexSpectrum, Matrix, DEFAULT_RANK_TOL};
use crate::method::{Method, RateFamily};
use crate::model::RidgeProblem;

/// Nonzero singular values of `A` together with the problem shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralInfo {
    sigma: Vec<f64>,
    d: usize,
    big_n: usize,
    lambda_n: f64,
}

/// Zeros `θ̄ⱼ` of `δⱼ(θ) = θ²σⱼ² − 4(1−θ)λn`, non-decreasing in `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaThresholds {
    pub theta_bar: Vec<f64>,
}

/// Theoretical convergence rate of one method at one relaxation value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub method: Method,
    pub theta: f64,
    pub spectral_radius: f64,
    pub optimal_theta: f64,
    pub optimal_rate: f64,
    pub admissible_upper: f64,
}

impl SpectralInfo {
    /// `sigma` must be positive and non-increasing with at most `min(d, N)`
    /// entries.
    pub fn new(sigma: Vec<f64>, d: usize, big_n: usize, lambda_n: f64) -> Result<Self> {
        if !(lambda_n > 0.0 && lambda_n.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda*n must be positive, got {lambda_n}")));
        }
        if sigma.len() > d.min(big_n) {
            return Err(Error::InvalidArgument(format!(
                "{} singular values exceed min(d, N) = {}",
                sigma.len(),
                d.min(big_n)
            )));
        }
        if sigma.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidArgument("singular values must be positive and finite".into()));
        }
        if sigma.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidArgument("singular values must be non-increasing".into()));
        }
        Ok(Self {
            sigma,
            d,
            big_n,
            lambda_n,
        })
    }

    /// Computes the singular values of the problem's data matrix and keeps
    /// those above the default relative rank tolerance.
    pub fn from_problem(p: &RidgeProblem) -> Result<Self> {
        let mut sigma = singular_values(p.a())?;
        sigma.truncate(numerical_rank(&sigma, DEFAULT_RANK_TOL));
        Self::new(sigma, p.d(), p.big_n(), p.lambda_n())
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Rank `p`.
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn lambda_n(&self) -> f64 {
        self.lambda_n
    }

    /// Largest singular value, zero when `A = 0`.
    pub fn sigma1(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Dimension `d + N` of the iteration matrices.
    pub fn dim(&self) -> usize {
        self.d + self.big_n
    }
}

/// Eigenvalues of `M₁`: `−σⱼ²/λn` twice each, then zeros.
pub fn spectrum_m1(s: &SpectralInfo) -> ComplexSpectrum {
    let mut values = Vec::with_capacity(s.dim());
    for &sigma in &s.sigma {
        let v = -sigma * sigma / s.lambda_n;
        values.extend([v, v]);
    }
    values.resize(s.dim(), 0.0);
    ComplexSpectrum::from_real(values)
}

/// Eigenvalues of `M₂`: `±i·σⱼ/√λn`, then zeros.
pub fn spectrum_m2(s: &SpectralInfo) -> ComplexSpectrum {
    let root = s.lambda_n.sqrt();
    let mut values = Vec::with_capacity(s.dim());
    for &sigma in &s.sigma {
        let im = sigma / root;
        values.extend([Complex64::new(0.0, im), Complex64::new(0.0, -im)]);
    }
    values.resize(s.dim(), Complex64::new(0.0, 0.0));
    ComplexSpectrum::new(values)
}

/// `(ρ(M₁), ρ(M₂)) = (σ₁²/λn, σ₁/√λn)`; `(0, 0)` when `A = 0`.
pub fn spectral_radii(s: &SpectralInfo) -> (f64, f64) {
    let sigma1 = s.sigma1();
    (sigma1 * sigma1 / s.lambda_n, sigma1 / s.lambda_n.sqrt())
}

/// Eigenvalues of `G₁(θ)`: `1 − θ − θσⱼ²/λn` twice each, then `1 − θ`.
pub fn spectrum_g1(s: &SpectralInfo, theta: f64) -> ComplexSpectrum {
    let mut values = Vec::with_capacity(s.dim());
    for &sigma in &s.sigma {
        let v = 1.0 - theta - theta * sigma * sigma / s.lambda_n;
        values.extend([v, v]);
    }
    values.resize(s.dim(), 1.0 - theta);
    ComplexSpectrum::from_real(values)
}

/// Eigenvalues of `G₂(θ)`: `1 − θ ± iθσⱼ/√λn`, then `1 − θ`.
pub fn spectrum_g2(s: &SpectralInfo, theta: f64) -> ComplexSpectrum {
    let root = s.lambda_n.sqrt();
    let mut values = Vec::with_capacity(s.dim());
    for &sigma in &s.sigma {
        let im = theta * sigma / root;
        values.extend([Complex64::new(1.0 - theta, im), Complex64::new(1.0 - theta, -im)]);
    }
    values.resize(s.dim(), Complex64::new(1.0 - theta, 0.0));
    ComplexSpectrum::new(values)
}

/// The eigenvalue pair of `G₃(θ)` attached to `σ`, as `(λ⁻, λ⁺)`.
///
/// The pair solves `t² − St + (1−θ)² = 0` with
/// `S = (2(1−θ)λn − θ²σ²)/λn`. Real pairs are ordered `λ⁻ ≤ λ⁺`; complex
/// pairs have `λ⁻` in the lower half plane.
pub fn g3_pair(sigma: f64, lambda_n: f64, theta: f64) -> (Complex64, Complex64) {
    let b = 2.0 * (1.0 - theta) * lambda_n - theta * theta * sigma * sigma;
    let mut disc = delta_value(sigma, lambda_n, theta);
    // A discriminant within its own rounding uncertainty (including the
    // representation error of θ itself) is treated as a double root; its
    // square root would otherwise inject an error of order √ε.
    let magnitude = (theta * sigma).powi(2)
        + (4.0 * (1.0 - theta) * lambda_n).abs()
        + theta.abs() * (2.0 * theta.abs() * sigma * sigma + 4.0 * lambda_n);
    if disc.abs() <= 8.0 * f64::EPSILON * magnitude {
        disc = 0.0;
    }
    let scale = 2.0 * lambda_n;
    if disc < 0.0 {
        let re = b / scale;
        let im = theta * sigma * (-disc).sqrt() / scale;
        (Complex64::new(re, -im), Complex64::new(re, im))
    } else {
        // larger-magnitude root first, the other from the product (1−θ)²
        let big = (b + b.signum() * theta * sigma * disc.sqrt()) / scale;
        let product = (1.0 - theta) * (1.0 - theta);
        let small = if big == 0.0 { 0.0 } else { product / big };
        let (lo, hi) = if big <= small { (big, small) } else { (small, big) };
        (Complex64::new(lo, 0.0), Complex64::new(hi, 0.0))
    }
}

/// Eigenvalues of `G₃(θ)`: one [`g3_pair`] per singular value, then `1 − θ`.
pub fn spectrum_g3(s: &SpectralInfo, theta: f64) -> ComplexSpectrum {
    let mut values = Vec::with_capacity(s.dim());
    for &sigma in &s.sigma {
        let (lo, hi) = g3_pair(sigma, s.lambda_n, theta);
        values.extend([lo, hi]);
    }
    values.resize(s.dim(), Complex64::new(1.0 - theta, 0.0));
    ComplexSpectrum::new(values)
}

fn delta_value(sigma: f64, lambda_n: f64, theta: f64) -> f64 {
    theta * theta * sigma * sigma - 4.0 * (1.0 - theta) * lambda_n
}

/// `δⱼ(θ) = θ²σⱼ² − 4(1−θ)λn` for the zero-based index `j`.
pub fn delta(s: &SpectralInfo, j: usize, theta: f64) -> Result<f64> {
    let sigma = *s.sigma.get(j).ok_or(Error::IndexOutOfRange {
        index: j,
        len: s.rank(),
    })?;
    Ok(delta_value(sigma, s.lambda_n, theta))
}

/// Zero of `δ` for a single singular value, `2/(1 + √(1 + σ²/λn))`.
///
/// Algebraically equal to `(−2λn + 2√(λn(λn+σ²)))/σ²` but without the
/// cancellation when `σ² ≪ λn`.
pub fn theta_bar(sigma: f64, lambda_n: f64) -> f64 {
    2.0 / (1.0 + (1.0 + sigma * sigma / lambda_n).sqrt())
}

pub fn theta_thresholds(s: &SpectralInfo) -> ThetaThresholds {
    ThetaThresholds {
        theta_bar: s.sigma.iter().map(|&sigma| theta_bar(sigma, s.lambda_n)).collect(),
    }
}

/// `ρ₁(θ) = max(|1 − θ(1 + σ₁²/λn)|, |1 − θ|)`.
pub fn rho_separable(sigma1: f64, lambda_n: f64, theta: f64) -> f64 {
    let extreme = (1.0 - theta * (1.0 + sigma1 * sigma1 / lambda_n)).abs();
    extreme.max((1.0 - theta).abs())
}

/// `ρ₂(θ) = √((1−θ)² + θ²σ₁²/λn)`.
pub fn rho_coupled(sigma1: f64, lambda_n: f64, theta: f64) -> f64 {
    ((1.0 - theta).powi(2) + theta * theta * sigma1 * sigma1 / lambda_n).sqrt()
}

/// `ρ₃(θ)`: equal to `|1 − θ|` up to `θ̄₁`, then the modulus of the
/// outermost real eigenvalue `λ₁⁻`.
pub fn rho_gauss_seidel(sigma1: f64, lambda_n: f64, theta: f64) -> f64 {
    let (lo, hi) = g3_pair(sigma1, lambda_n, theta);
    (1.0 - theta).abs().max(lo.norm()).max(hi.norm())
}

/// Spectral radius of the iteration matrix of `family` at `θ`.
pub fn rho(family: RateFamily, sigma1: f64, lambda_n: f64, theta: f64) -> f64 {
    match family {
        RateFamily::Separable => rho_separable(sigma1, lambda_n, theta),
        RateFamily::Coupled => rho_coupled(sigma1, lambda_n, theta),
        RateFamily::GaussSeidel => rho_gauss_seidel(sigma1, lambda_n, theta),
    }
}

/// Minimizer `θ*` of the family's spectral radius.
pub fn optimal_theta(family: RateFamily, sigma1: f64, lambda_n: f64) -> f64 {
    let s2 = sigma1 * sigma1;
    match family {
        RateFamily::Separable => 2.0 * lambda_n / (2.0 * lambda_n + s2),
        RateFamily::Coupled => lambda_n / (lambda_n + s2),
        RateFamily::GaussSeidel => theta_bar(sigma1, lambda_n),
    }
}

/// Optimal rate `ρ* = ρ(θ*)` in closed form.
pub fn optimal_rate(family: RateFamily, sigma1: f64, lambda_n: f64) -> f64 {
    let s2 = sigma1 * sigma1;
    match family {
        RateFamily::Separable => s2 / (2.0 * lambda_n + s2),
        RateFamily::Coupled => sigma1 / (lambda_n + s2).sqrt(),
        RateFamily::GaussSeidel => 1.0 - theta_bar(sigma1, lambda_n),
    }
}

/// Upper end of the open interval `(0, θ_max)` on which the family's
/// spectral radius is below one.
pub fn admissible_upper(family: RateFamily, sigma1: f64, lambda_n: f64) -> f64 {
    match family {
        RateFamily::Separable | RateFamily::Coupled => 2.0 * lambda_n / (lambda_n + sigma1 * sigma1),
        RateFamily::GaussSeidel => {
            let root = lambda_n.sqrt();
            2.0 * root / (root + sigma1)
        }
    }
}

/// Rate summary from `σ₁` and `λn` alone. `None` for CG, which has no
/// relaxation parameter.
pub fn rate_report_from_sigma1(method: Method, sigma1: f64, lambda_n: f64, theta: f64) -> Option<RateReport> {
    let family = method.rate_family()?;
    Some(RateReport {
        method,
        theta,
        spectral_radius: rho(family, sigma1, lambda_n, theta),
        optimal_theta: optimal_theta(family, sigma1, lambda_n),
        optimal_rate: optimal_rate(family, sigma1, lambda_n),
        admissible_upper: admissible_upper(family, sigma1, lambda_n),
    })
}

pub fn rate_report(s: &SpectralInfo, method: Method, theta: f64) -> Option<RateReport> {
    rate_report_from_sigma1(method, s.sigma1(), s.lambda_n, theta)
}

/// Dense iteration matrix `G(θ)` of `family` for the given problem.
///
/// Meant for verification; the solvers never form it.
pub fn iteration_matrix(p: &RidgeProblem, family: RateFamily, theta: f64) -> Matrix {
    let (d, big_n) = (p.d(), p.big_n());
    let lambda_n = p.lambda_n();
    let a = p.a();
    let at = a.transpose();
    let mut g = Matrix::zeros(d + big_n, d + big_n);
    match family {
        RateFamily::Separable => {
            let aat = a.matmul(&at).expect("conformable");
            let ata = at.matmul(a).expect("conformable");
            g.set_block(0, 0, &aat.scaled(-theta / lambda_n));
            g.set_block(d, d, &ata.scaled(-theta / lambda_n));
        }
        RateFamily::Coupled => {
            g.set_block(0, d, &a.scaled(theta / lambda_n));
            g.set_block(d, 0, &at.scaled(-theta));
        }
        RateFamily::GaussSeidel => {
            let ata = at.matmul(a).expect("conformable");
            g.set_block(0, d, &a.scaled(theta / lambda_n));
            g.set_block(d, 0, &at.scaled(theta * (theta - 1.0)));
            g.set_block(d, d, &ata.scaled(-theta * theta / lambda_n));
        }
    }
    for i in 0..d + big_n {
        g[(i, i)] += 1.0 - theta;
    }
    g
}
