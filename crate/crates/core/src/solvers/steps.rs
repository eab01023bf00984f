//! Single iterations of the fixed-point schemes.
//!
//! Every step except [`step_generic`] works with products by `A` and `Aᵀ`
//! only; no `(d+N)`-sized matrix is formed.

use crate::error::{check_len, Error, Result};
use crate::linalg::Matrix;
use crate::method::Method;
use crate::model::{OptimalitySystem, PrimalDualPoint, RidgeProblem};

/// `(1−θ)·current + θ·target`, elementwise.
fn relax(current: &[f64], target: impl IntoIterator<Item = f64>, theta: f64) -> Vec<f64> {
    current
        .iter()
        .zip(target)
        .map(|(c, t)| (1.0 - theta) * c + theta * t)
        .collect()
}

/// `y − Aᵀw`.
fn dual_target(p: &RidgeProblem, w: &[f64]) -> Vec<f64> {
    p.response_residual(w).into_iter().map(|r| -r).collect()
}

/// `x ↦ (1−θ)x + θ(Mx + b)` on an assembled system.
pub fn step_generic(sys: &OptimalitySystem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    let flat = x.to_flat();
    let mapped = sys.matrix.matvec(&flat)?;
    let next = relax(&flat, mapped.iter().zip(&sys.b).map(|(m, b)| m + b), theta);
    PrimalDualPoint::from_flat(x.w.len(), &next)
}

/// Relaxed step on the separable system:
/// `w ← (1−θ)w − (θ/λn)A(Aᵀw − y)`, `α ← (1−θ)α + θ(y − AᵀAα/λn)`.
pub fn step_pdfp1(p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    p.check_point(x)?;
    let lambda_n = p.lambda_n();
    let a_res = p.a().matvec_unchecked(&p.response_residual(&x.w));
    let w = relax(&x.w, a_res.iter().map(|v| -v / lambda_n), theta);
    let ata_alpha = p.a().matvec_t_unchecked(&p.a().matvec_unchecked(&x.alpha));
    let alpha = relax(
        &x.alpha,
        p.y().iter().zip(&ata_alpha).map(|(y, g)| y - g / lambda_n),
        theta,
    );
    Ok(PrimalDualPoint { w, alpha })
}

/// Relaxed step on the coupled system, both blocks from the old iterate:
/// `w ← (1−θ)w + θᾱ`, `α ← (1−θ)α + θ(y − Aᵀw)`.
pub fn step_pdfp2(p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    p.check_point(x)?;
    let w = relax(&x.w, p.alphabar_unchecked(&x.alpha), theta);
    let alpha = relax(&x.alpha, dual_target(p, &x.w), theta);
    Ok(PrimalDualPoint { w, alpha })
}

/// Primal block first, then the dual block from the fresh primal iterate.
pub fn step_qtz(p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    p.check_point(x)?;
    let w = relax(&x.w, p.alphabar_unchecked(&x.alpha), theta);
    let alpha = relax(&x.alpha, dual_target(p, &w), theta);
    Ok(PrimalDualPoint { w, alpha })
}

/// Dual block first, then the primal block from the fresh dual iterate.
pub fn step_nqtz(p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    p.check_point(x)?;
    let alpha = relax(&x.alpha, dual_target(p, &x.w), theta);
    let w = relax(&x.w, p.alphabar_unchecked(&alpha), theta);
    Ok(PrimalDualPoint { w, alpha })
}

/// `w ← ᾱ` without relaxation, then `α ← (1−θ)α + θ(y − Aᵀw)` with the new `w`.
pub fn step_mqtz(p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    p.check_point(x)?;
    let w = p.alphabar_unchecked(&x.alpha);
    let alpha = relax(&x.alpha, dual_target(p, &w), theta);
    Ok(PrimalDualPoint { w, alpha })
}

/// `α ← y − Aᵀw` without relaxation, then `w ← (1−θ)w + θ·(1/λn)Aα` with the new `α`.
pub fn step_mqtz2(p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    p.check_point(x)?;
    let alpha = dual_target(p, &x.w);
    let w = relax(&x.w, p.alphabar_unchecked(&alpha), theta);
    Ok(PrimalDualPoint { w, alpha })
}

/// One step of `method`. CG has no fixed-point step and is rejected.
pub fn step(method: Method, p: &RidgeProblem, x: &PrimalDualPoint, theta: f64) -> Result<PrimalDualPoint> {
    match method {
        Method::Pdfp1 => step_pdfp1(p, x, theta),
        Method::Pdfp2 => step_pdfp2(p, x, theta),
        Method::Qtz => step_qtz(p, x, theta),
        Method::Nqtz => step_nqtz(p, x, theta),
        Method::Mqtz => step_mqtz(p, x, theta),
        Method::Mqtz2 => step_mqtz2(p, x, theta),
        Method::Cg => Err(Error::InvalidArgument("cg has no fixed-point step".into())),
    }
}

/// `‖S₂(S₂(x)) − S₁(x)‖`, where `S₂` and `S₁` are unrelaxed steps on the
/// coupled and separable systems. Two coupled steps compose to one separable
/// step, so this is zero up to rounding.
pub fn two_step_equivalence_check(p: &RidgeProblem, x: &PrimalDualPoint) -> Result<f64> {
    let twice = step_pdfp2(p, &step_pdfp2(p, x, 1.0)?, 1.0)?;
    let once = step_pdfp1(p, x, 1.0)?;
    Ok(twice.distance(&once))
}

/// Dense matrix of the linear part of `method`'s step at `θ`, obtained by
/// applying the step to each standard basis vector with the response set to
/// zero. Intended for analysis and tests.
pub fn probe_iteration_matrix(p: &RidgeProblem, method: Method, theta: f64) -> Result<Matrix> {
    let homogeneous = p.with_response(vec![0.0; p.big_n()])?;
    let dim = p.d() + p.big_n();
    let mut g = Matrix::zeros(dim, dim);
    let mut basis = vec![0.0; dim];
    for j in 0..dim {
        basis[j] = 1.0;
        let image = step(method, &homogeneous, &PrimalDualPoint::from_flat(p.d(), &basis)?, theta)?.to_flat();
        check_len("probe_iteration_matrix", dim, image.len())?;
        for (i, v) in image.into_iter().enumerate() {
            g[(i, j)] = v;
        }
        basis[j] = 0.0;
    }
    Ok(g)
}
