//! Primal, dual and duality-gap objectives of ridge regression, together with
//! the two fixed-point forms of the optimality conditions.
//!
//! With data `A ∈ ℝ^{d×N}` (columns grouped into `n` blocks of `m`), response
//! `y ∈ ℝ^N` and regularizer `λ > 0`:
//!
//! ```text
//! P(w) = (1/2n)‖Aᵀw − y‖² + (λ/2)‖w‖²
//! D(α) = −(1/2λn²)‖Aα‖² + (1/n)αᵀy − (1/2n)‖α‖²
//! f(w, α) = P(w) − D(α)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{cholesky_solve, distance, dot, norm, Matrix};

/// A ridge regression instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeProblem {
    a: Matrix,
    y: Vec<f64>,
    lambda: f64,
    n: usize,
    m: usize,
}

/// Primal-dual iterate `x = (w, α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimalDualPoint {
    pub w: Vec<f64>,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// `x = M₁x + b₁`, block diagonal in `(w, α)`.
    Separable,
    /// `x = M₂x + b₂`, primal and dual coupled through `A`.
    Coupled,
}

/// Dense fixed-point form `x = Mx + b` of the optimality conditions.
#[derive(Debug, Clone)]
pub struct OptimalitySystem {
    pub matrix: Matrix,
    pub b: Vec<f64>,
    pub kind: SystemKind,
}

impl OptimalitySystem {
    /// `‖Mx + b − x‖`.
    pub fn residual(&self, x: &PrimalDualPoint) -> Result<f64> {
        let flat = x.to_flat();
        let mapped = self.matrix.matvec(&flat)?;
        Ok(mapped
            .iter()
            .zip(&self.b)
            .zip(&flat)
            .map(|((mx, b), xi)| (mx + b - xi).powi(2))
            .sum::<f64>()
            .sqrt())
    }
}

impl PrimalDualPoint {
    pub fn zeros(d: usize, big_n: usize) -> Self {
        Self {
            w: vec![0.0; d],
            alpha: vec![0.0; big_n],
        }
    }

    pub fn from_flat(d: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() < d {
            return Err(Error::DimensionMismatch {
                context: "PrimalDualPoint::from_flat",
                expected: d,
                actual: flat.len(),
            });
        }
        Ok(Self {
            w: flat[..d].to_vec(),
            alpha: flat[d..].to_vec(),
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.w.len() + self.alpha.len());
        v.extend_from_slice(&self.w);
        v.extend_from_slice(&self.alpha);
        v
    }

    pub fn dim(&self) -> usize {
        self.w.len() + self.alpha.len()
    }

    pub fn norm(&self) -> f64 {
        (dot(&self.w, &self.w) + dot(&self.alpha, &self.alpha)).sqrt()
    }

    pub fn distance(&self, other: &PrimalDualPoint) -> f64 {
        distance(&self.w, &other.w).hypot(distance(&self.alpha, &other.alpha))
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().chain(&self.alpha).all(|v| v.is_finite())
    }
}

/// Fenchel conjugate of `g(w) = ½‖w‖²`, i.e. `g*(u) = ½‖u‖²`.
pub fn conjugate_g(u: &[f64]) -> f64 {
    0.5 * dot(u, u)
}

impl RidgeProblem {
    /// `a` is `d × (n·m)`, `y` has length `n·m`.
    pub fn new(a: Matrix, y: Vec<f64>, lambda: f64, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(format!(
                "block counts must be positive (n = {n}, m = {m})"
            )));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        check_len("RidgeProblem: columns of A vs n*m", n * m, a.cols())?;
        check_len("RidgeProblem: len(y) vs n*m", n * m, y.len())?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response vector"));
        }
        Ok(Self { a, y, lambda, n, m })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.a.rows()
    }

    pub fn big_n(&self) -> usize {
        self.n * self.m
    }

    pub fn lambda_n(&self) -> f64 {
        self.lambda * self.n as f64
    }

    /// Same data matrix and regularizer with a different response.
    pub fn with_response(&self, y: Vec<f64>) -> Result<Self> {
        Self::new(self.a.clone(), y, self.lambda, self.n, self.m)
    }

    /// Same response and regularizer with `A` scaled by `factor`.
    pub fn with_scaled_data(&self, factor: f64) -> Result<Self> {
        Self::new(self.a.scaled(factor), self.y.clone(), self.lambda, self.n, self.m)
    }

    pub fn zero_point(&self) -> PrimalDualPoint {
        PrimalDualPoint::zeros(self.d(), self.big_n())
    }

    pub(crate) fn check_point(&self, x: &PrimalDualPoint) -> Result<()> {
        check_len("primal block w", self.d(), x.w.len())?;
        check_len("dual block alpha", self.big_n(), x.alpha.len())
    }

    pub fn primal_value(&self, w: &[f64]) -> Result<f64> {
        check_len("primal_value", self.d(), w.len())?;
        let residual = self.response_residual(w);
        Ok(dot(&residual, &residual) / (2.0 * self.n as f64) + 0.5 * self.lambda * dot(w, w))
    }

    pub fn dual_value(&self, alpha: &[f64]) -> Result<f64> {
        check_len("dual_value", self.big_n(), alpha.len())?;
        let n = self.n as f64;
        let a_alpha = self.a.matvec_unchecked(alpha);
        Ok(-dot(&a_alpha, &a_alpha) / (2.0 * self.lambda * n * n) + dot(alpha, &self.y) / n
            - dot(alpha, alpha) / (2.0 * n))
    }

    /// Duality gap `P(w) − D(α)`.
    ///
    /// Evaluated as `(λ/2)‖w − ᾱ‖² + (1/2n)‖Aᵀw − y + α‖²`, the sum of the two
    /// Fenchel–Young gaps, which is non-negative by construction and free of
    /// cancellation near the optimum.
    pub fn gap_value(&self, x: &PrimalDualPoint) -> Result<f64> {
        self.check_point(x)?;
        let abar = self.alphabar_unchecked(&x.alpha);
        let primal_part: f64 = x.w.iter().zip(&abar).map(|(w, a)| (w - a).powi(2)).sum();
        let dual_part: f64 = self
            .response_residual(&x.w)
            .iter()
            .zip(&x.alpha)
            .map(|(r, a)| (r + a).powi(2))
            .sum();
        Ok(0.5 * self.lambda * primal_part + dual_part / (2.0 * self.n as f64))
    }

    /// `∇f(x) = (∇P(w), −∇D(α))`.
    pub fn gap_gradient(&self, x: &PrimalDualPoint) -> Result<PrimalDualPoint> {
        self.check_point(x)?;
        let n = self.n as f64;
        let lambda_n = self.lambda_n();
        let residual = self.response_residual(&x.w);
        let a_res = self.a.matvec_unchecked(&residual);
        let w: Vec<f64> = a_res
            .iter()
            .zip(&x.w)
            .map(|(ar, wi)| ar / n + self.lambda * wi)
            .collect();
        let ata_alpha = self.a.matvec_t_unchecked(&self.a.matvec_unchecked(&x.alpha));
        let alpha: Vec<f64> = ata_alpha
            .iter()
            .zip(&x.alpha)
            .zip(&self.y)
            .map(|((g, ai), yi)| g / (lambda_n * n) + ai / n - yi / n)
            .collect();
        Ok(PrimalDualPoint { w, alpha })
    }

    /// `∇²f · v`; the Hessian is constant since `f` is quadratic.
    pub fn hessian_apply(&self, v: &PrimalDualPoint) -> Result<PrimalDualPoint> {
        self.check_point(v)?;
        let n = self.n as f64;
        let lambda_n = self.lambda_n();
        let aat_w = self.a.matvec_unchecked(&self.a.matvec_t_unchecked(&v.w));
        let ata_a = self.a.matvec_t_unchecked(&self.a.matvec_unchecked(&v.alpha));
        Ok(PrimalDualPoint {
            w: aat_w.iter().zip(&v.w).map(|(g, w)| (g + lambda_n * w) / n).collect(),
            alpha: ata_a
                .iter()
                .zip(&v.alpha)
                .map(|(g, a)| (g / lambda_n + a) / n)
                .collect(),
        })
    }

    /// Dense `∇²f = (1/n)·blockdiag(AAᵀ + λnI, (1/λn)AᵀA + I)`.
    pub fn hessian_matrix(&self) -> Matrix {
        let (d, big_n) = (self.d(), self.big_n());
        let n = self.n as f64;
        let lambda_n = self.lambda_n();
        let at = self.a.transpose();
        let aat = self.a.matmul(&at).expect("conformable");
        let ata = at.matmul(&self.a).expect("conformable");
        let mut h = Matrix::zeros(d + big_n, d + big_n);
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] = (aat[(i, j)] + if i == j { lambda_n } else { 0.0 }) / n;
            }
        }
        for i in 0..big_n {
            for j in 0..big_n {
                h[(d + i, d + j)] = (ata[(i, j)] / lambda_n + if i == j { 1.0 } else { 0.0 }) / n;
            }
        }
        h
    }

    /// `φᵢ*(s) = ½‖s‖² + sᵀyᵢ` for the zero-based block index `i`.
    pub fn conjugate_phi(&self, i: usize, s: &[f64]) -> Result<f64> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, len: self.n });
        }
        check_len("conjugate_phi", self.m, s.len())?;
        let yi = &self.y[i * self.m..(i + 1) * self.m];
        Ok(0.5 * dot(s, s) + dot(s, yi))
    }

    /// `φᵢ(z) = ½‖z − yᵢ‖²` for the zero-based block index `i`.
    pub fn phi(&self, i: usize, z: &[f64]) -> Result<f64> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, len: self.n });
        }
        check_len("phi", self.m, z.len())?;
        let yi = &self.y[i * self.m..(i + 1) * self.m];
        Ok(0.5 * distance(z, yi).powi(2))
    }

    /// `ᾱ = (1/λn)Aα`.
    pub fn alphabar(&self, alpha: &[f64]) -> Result<Vec<f64>> {
        check_len("alphabar", self.big_n(), alpha.len())?;
        Ok(self.alphabar_unchecked(alpha))
    }

    pub(crate) fn alphabar_unchecked(&self, alpha: &[f64]) -> Vec<f64> {
        let scale = 1.0 / self.lambda_n();
        self.a
            .matvec_unchecked(alpha)
            .into_iter()
            .map(|v| v * scale)
            .collect()
    }

    /// `Aᵀw − y`.
    pub(crate) fn response_residual(&self, w: &[f64]) -> Vec<f64> {
        let mut r = self.a.matvec_t_unchecked(w);
        for (ri, yi) in r.iter_mut().zip(&self.y) {
            *ri -= yi;
        }
        r
    }

    /// Assembles `(M, b)` densely. Meant for analysis and tests; the solvers
    /// work with products by `A` and `Aᵀ` instead.
    pub fn build_system(&self, kind: SystemKind) -> OptimalitySystem {
        let (d, big_n) = (self.d(), self.big_n());
        let lambda_n = self.lambda_n();
        let mut matrix = Matrix::zeros(d + big_n, d + big_n);
        let b = match kind {
            SystemKind::Separable => {
                let at = self.a.transpose();
                let aat = self.a.matmul(&at).expect("conformable");
                let ata = at.matmul(&self.a).expect("conformable");
                matrix.set_block(0, 0, &aat.scaled(-1.0 / lambda_n));
                matrix.set_block(d, d, &ata.scaled(-1.0 / lambda_n));
                let ay = self.a.matvec_unchecked(&self.y);
                ay.iter()
                    .map(|v| v / lambda_n)
                    .chain(self.y.iter().copied())
                    .collect()
            }
            SystemKind::Coupled => {
                matrix.set_block(0, d, &self.a.scaled(1.0 / lambda_n));
                matrix.set_block(d, 0, &self.a.transpose().scaled(-1.0));
                std::iter::repeat_n(0.0, d)
                    .chain(self.y.iter().copied())
                    .collect()
            }
        };
        OptimalitySystem { matrix, b, kind }
    }

    /// The unique minimizer of the gap, by a dense Cholesky solve of the
    /// smaller normal-equation system.
    ///
    /// For `d ≤ N` this solves `(AAᵀ + λnI)w = Ay` and sets `α = y − Aᵀw`;
    /// otherwise it solves `(AᵀA + λnI)α = λn·y` and sets `w = ᾱ`.
    pub fn solve_direct(&self) -> Result<PrimalDualPoint> {
        let lambda_n = self.lambda_n();
        let (d, big_n) = (self.d(), self.big_n());
        if d <= big_n {
            let mut gram = self.a.matmul(&self.a.transpose())?;
            for i in 0..d {
                gram[(i, i)] += lambda_n;
            }
            let w = cholesky_solve(&gram, &self.a.matvec_unchecked(&self.y))?;
            let alpha = self.response_residual(&w).into_iter().map(|r| -r).collect();
            Ok(PrimalDualPoint { w, alpha })
        } else {
            let at = self.a.transpose();
            let mut gram = at.matmul(&self.a)?;
            for i in 0..big_n {
                gram[(i, i)] += lambda_n;
            }
            let rhs: Vec<f64> = self.y.iter().map(|v| v * lambda_n).collect();
            let alpha = cholesky_solve(&gram, &rhs)?;
            let w = self.alphabar_unchecked(&alpha);
            Ok(PrimalDualPoint { w, alpha })
        }
    }

    /// Residuals `(‖w − ᾱ‖, ‖α − (y − Aᵀw)‖)` of the coupled optimality
    /// relations.
    pub fn optimality_residuals(&self, x: &PrimalDualPoint) -> Result<(f64, f64)> {
        self.check_point(x)?;
        let abar = self.alphabar_unchecked(&x.alpha);
        let r1 = distance(&x.w, &abar);
        let r2 = norm(
            &self
                .response_residual(&x.w)
                .iter()
                .zip(&x.alpha)
                .map(|(r, a)| r + a)
                .collect::<Vec<_>>(),
        );
        Ok((r1, r2))
    }
}
