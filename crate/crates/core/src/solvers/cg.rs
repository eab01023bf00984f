//! Conjugate gradient on the gap quadratic `f`, whose minimizer is the
//! primal-dual solution.

use crate::linalg::dot;
use crate::model::{PrimalDualPoint, RidgeProblem};

/// Iteration state of CG on `∇²f·x = −∇f(0)`.
pub(crate) struct CgState {
    d: usize,
    x: Vec<f64>,
    residual: Vec<f64>,
    direction: Vec<f64>,
    residual_sq: f64,
}

impl CgState {
    pub(crate) fn new(p: &RidgeProblem, x0: &PrimalDualPoint) -> crate::error::Result<Self> {
        let residual: Vec<f64> = p.gap_gradient(x0)?.to_flat().into_iter().map(|g| -g).collect();
        let residual_sq = dot(&residual, &residual);
        Ok(Self {
            d: x0.w.len(),
            x: x0.to_flat(),
            direction: residual.clone(),
            residual,
            residual_sq,
        })
    }

    /// `true` once the gradient vanishes exactly; further steps would divide
    /// by zero.
    pub(crate) fn is_stationary(&self) -> bool {
        self.residual_sq == 0.0
    }

    pub(crate) fn point(&self) -> PrimalDualPoint {
        PrimalDualPoint::from_flat(self.d, &self.x).expect("length fixed at construction")
    }

    /// Advances one iteration and returns the new iterate.
    pub(crate) fn advance(&mut self, p: &RidgeProblem) -> crate::error::Result<PrimalDualPoint> {
        if self.is_stationary() {
            return Ok(self.point());
        }
        let dir = PrimalDualPoint::from_flat(self.d, &self.direction)?;
        let h_dir = p.hessian_apply(&dir)?.to_flat();
        let curvature = dot(&self.direction, &h_dir);
        let step = self.residual_sq / curvature;
        for (xi, di) in self.x.iter_mut().zip(&self.direction) {
            *xi += step * di;
        }
        for (ri, hi) in self.residual.iter_mut().zip(&h_dir) {
            *ri -= step * hi;
        }
        let next_sq = dot(&self.residual, &self.residual);
        let beta = next_sq / self.residual_sq;
        for (di, ri) in self.direction.iter_mut().zip(&self.residual) {
            *di = ri + beta * *di;
        }
        self.residual_sq = next_sq;
        Ok(self.point())
    }
}
