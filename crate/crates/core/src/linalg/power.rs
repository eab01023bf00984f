use serde::{Deserialize, Serialize};

use super::matrix::{dot, norm, Matrix};
use crate::error::{Error, Result};
use crate::io::rng::SplitMix64;

/// Outcome of [`power_iteration_sigma1`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    pub sigma: f64,
    pub iterations: usize,
    /// `false` when `max_iter` ran out first; `sigma` is then the last estimate.
    pub converged: bool,
}

/// Estimates the largest singular value by power iteration on the smaller of
/// `AAᵀ` and `AᵀA`, stopping when successive estimates agree to `tol`
/// (relative).
pub fn power_iteration_sigma1(a: &Matrix, tol: f64, max_iter: usize) -> Result<PowerEstimate> {
    if a.as_slice().iter().all(|&v| v == 0.0) {
        return Err(Error::Precondition(
            "power iteration needs a nonzero matrix".into(),
        ));
    }
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::Precondition(format!(
            "power iteration needs tol > 0 and max_iter >= 1 (got {tol}, {max_iter})"
        )));
    }
    let short_rows = a.rows() <= a.cols();
    let gram = |v: &[f64]| -> Vec<f64> {
        if short_rows {
            a.matvec_unchecked(&a.matvec_t_unchecked(v))
        } else {
            a.matvec_t_unchecked(&a.matvec_unchecked(v))
        }
    };
    let dim = a.rows().min(a.cols());

    for seed in 0u64.. {
        let mut rng = SplitMix64::new(0x5eed_0000 + seed);
        let mut v: Vec<f64> = (0..dim).map(|_| rng.next_standard_normal()).collect();
        let n0 = norm(&v);
        v.iter_mut().for_each(|x| *x /= n0);

        let mut sigma = 0.0_f64;
        for k in 1..=max_iter {
            let g = gram(&v);
            let next = dot(&v, &g).max(0.0).sqrt();
            let gn = norm(&g);
            if gn == 0.0 {
                break;
            }
            v = g.into_iter().map(|x| x / gn).collect();
            if k > 1 && (next - sigma).abs() <= tol * next {
                return Ok(PowerEstimate {
                    sigma: next,
                    iterations: k,
                    converged: true,
                });
            }
            sigma = next;
            if k == max_iter {
                return Ok(PowerEstimate {
                    sigma,
                    iterations: k,
                    converged: false,
                });
            }
        }
        // start vector fell into the null space; retry from another one
        if seed >= 8 {
            break;
        }
    }
    Err(Error::NoConvergence {
        algorithm: "power iteration",
        rows: a.rows(),
        cols: a.cols(),
        iterations: max_iter,
    })
}
