//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! The rotations act on the columns of whichever of `A` or `Aᵀ` has fewer
//! columns, so the cost per sweep is `O(min(d, N)² · max(d, N))`.

use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

/// Relative threshold below which a singular value does not count toward
/// the rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

/// Full SVD `A = U Σ Vᵀ` with square orthogonal factors.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `d × d` orthogonal.
    pub u: Matrix,
    /// `min(d, N)` values, non-increasing.
    pub singular_values: Vec<f64>,
    /// `N × N`, the transpose of the orthogonal `V`.
    pub vt: Matrix,
    /// Number of singular values above `rank_tol · σ₁`.
    pub rank: usize,
}

impl SvdResult {
    /// Rebuilds `U Σ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let (d, n) = (self.u.rows(), self.vt.cols());
        let mut out = Matrix::zeros(d, n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            let vk = self.vt.row(k);
            for i in 0..d {
                let f = self.u[(i, k)] * s;
                for (o, &v) in out.row_mut(i).iter_mut().zip(vk) {
                    *o += f * v;
                }
            }
        }
        out
    }
}

/// Counts singular values above `rank_tol · σ₁`.
pub fn numerical_rank(singular_values: &[f64], rank_tol: f64) -> usize {
    match singular_values.first() {
        Some(&s1) if s1 > 0.0 => singular_values.iter().filter(|&&s| s > rank_tol * s1).count(),
        _ => 0,
    }
}

/// Full singular value decomposition.
pub fn svd(a: &Matrix, rank_tol: f64) -> Result<SvdResult> {
    if rank_tol.is_nan() || rank_tol <= 0.0 {
        return Err(Error::Precondition(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let (d, n) = (a.rows(), a.cols());
    let transposed = d <= n;
    let columns = working_columns(a, transposed);
    let k = columns.len();
    let (columns, right) = jacobi_sweeps(columns, true, d, n)?;
    let right = right.expect("accumulated");

    let mut order: Vec<usize> = (0..k).collect();
    let norms: Vec<f64> = columns.iter().map(|c| dot(c, c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();

    let long_dim = if transposed { n } else { d };
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let floor = sigma_max * f64::EPSILON * long_dim.max(1) as f64;
    let long_vectors: Vec<Option<Vec<f64>>> = order
        .iter()
        .map(|&i| {
            (norms[i] > floor && norms[i] > 0.0)
                .then(|| columns[i].iter().map(|v| v / norms[i]).collect())
        })
        .collect();
    let long_basis = complete_basis(long_vectors, long_dim);
    // Sorted short-side vectors are already an orthogonal basis.
    let short_basis: Vec<Vec<f64>> = order.iter().map(|&i| right[i].clone()).collect();

    let (u_cols, v_cols) = if transposed {
        (short_basis, long_basis)
    } else {
        (long_basis, short_basis)
    };
    let mut u = Matrix::zeros(d, d);
    for (j, col) in u_cols.iter().enumerate() {
        for i in 0..d {
            u[(i, j)] = col[i];
        }
    }
    let mut vt = Matrix::zeros(n, n);
    for (j, col) in v_cols.iter().enumerate() {
        vt.row_mut(j).copy_from_slice(col);
    }

    let rank = numerical_rank(&singular_values, rank_tol);
    Ok(SvdResult {
        u,
        singular_values,
        vt,
        rank,
    })
}

/// Singular values only, non-increasing, `min(d, N)` of them.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let transposed = a.rows() <= a.cols();
    let columns = working_columns(a, transposed);
    let (columns, _) = jacobi_sweeps(columns, false, a.rows(), a.cols())?;
    let mut sigma: Vec<f64> = columns.iter().map(|c| dot(c, c).sqrt()).collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

fn working_columns(a: &Matrix, transposed: bool) -> Vec<Vec<f64>> {
    if transposed {
        (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
    } else {
        (0..a.cols())
            .map(|j| (0..a.rows()).map(|i| a[(i, j)]).collect())
            .collect()
    }
}

type Columns = Vec<Vec<f64>>;

fn jacobi_sweeps(
    mut cols: Columns,
    accumulate: bool,
    rows: usize,
    ncols: usize,
) -> Result<(Columns, Option<Columns>)> {
    let k = cols.len();
    let len = cols.first().map_or(0, Vec::len);
    let mut right = accumulate.then(|| {
        (0..k)
            .map(|j| {
                let mut e = vec![0.0; k];
                e[j] = 1.0;
                e
            })
            .collect::<Columns>()
    });
    let threshold = f64::EPSILON * len.max(1) as f64;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                let gamma = dot(&cols[i], &cols[j]);
                if gamma == 0.0 || gamma.abs() <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + 1.0_f64.hypot(zeta));
                let c = 1.0 / 1.0_f64.hypot(t);
                let s = c * t;
                rotate_pair(&mut cols, i, j, c, s);
                if let Some(v) = right.as_mut() {
                    rotate_pair(v, i, j, c, s);
                }
            }
        }
        if !rotated {
            return Ok((cols, right));
        }
    }
    Err(Error::NoConvergence {
        algorithm: "one-sided Jacobi SVD",
        rows,
        cols: ncols,
        iterations: MAX_SWEEPS,
    })
}

fn rotate_pair(cols: &mut Columns, i: usize, j: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(j);
    let (ci, cj) = (&mut head[i], &mut tail[0]);
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Re-orthonormalizes the given vectors in order and fills missing slots (and
/// any slots beyond them) from the standard basis until `dim` vectors exist.
fn complete_basis(vectors: Vec<Option<Vec<f64>>>, dim: usize) -> Columns {
    let mut basis: Columns = Vec::with_capacity(dim);
    let mut slots: Vec<Option<usize>> = Vec::with_capacity(dim);
    for v in vectors {
        match v.and_then(|v| orthonormalize_against(v, &basis)) {
            Some(q) => {
                slots.push(Some(basis.len()));
                basis.push(q);
            }
            None => slots.push(None),
        }
    }
    slots.resize(dim, None);

    let mut filled: Vec<Option<Vec<f64>>> = vec![None; dim];
    for slot in slots.iter_mut() {
        if slot.is_some() {
            continue;
        }
        // take the standard basis vector with the largest component outside
        // the current span
        let best = (0..dim)
            .map(|c| {
                let mut e = vec![0.0; dim];
                e[c] = 1.0;
                project_out(e, &basis)
            })
            .max_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
            .expect("dimension is positive");
        let nrm = dot(&best, &best).sqrt();
        *slot = Some(basis.len());
        basis.push(best.into_iter().map(|x| x / nrm).collect());
    }
    for (pos, slot) in slots.iter().enumerate() {
        let idx = slot.expect("standard basis spans the space");
        filled[pos] = Some(basis[idx].clone());
    }
    filled.into_iter().map(Option::unwrap).collect()
}

fn project_out(mut v: Vec<f64>, basis: &Columns) -> Vec<f64> {
    for _ in 0..2 {
        for q in basis {
            let proj = dot(q, &v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
    }
    v
}

fn orthonormalize_against(v: Vec<f64>, basis: &Columns) -> Option<Vec<f64>> {
    let start = dot(&v, &v).sqrt();
    if start == 0.0 {
        return None;
    }
    let mut v = project_out(v, basis);
    let nrm = dot(&v, &v).sqrt();
    if nrm < 0.5 * start {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= nrm);
    Some(v)
}
