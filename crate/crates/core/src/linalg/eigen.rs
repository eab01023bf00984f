//! Dense nonsymmetric eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, then Francis double-shift QR.
//!
//! Only used to cross-check closed-form spectra, so it favours simplicity over
//! speed and refuses matrices larger than [`MAX_DENSE_DIM`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};

pub const MAX_DENSE_DIM: usize = 2000;

const MAX_QR_ITERATIONS: usize = 60;

/// Multiset of (possibly complex) eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(eigenvalues: Vec<Complex64>) -> Self {
        Self { eigenvalues }
    }

    pub fn from_real(values: impl IntoIterator<Item = f64>) -> Self {
        Self::new(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues sorted lexicographically by `(re, im)`.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Largest pairing distance between two multisets of equal size.
    ///
    /// Each eigenvalue of `self` (in sorted order) is paired with the nearest
    /// still-unpaired eigenvalue of `other`. Returns `None` when the sizes differ.
    pub fn match_distance(&self, other: &ComplexSpectrum) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let mut remaining = other.sorted();
        let mut worst = 0.0_f64;
        for z in self.sorted() {
            let (idx, dist) = remaining
                .iter()
                .enumerate()
                .map(|(i, w)| (i, (z - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            worst = worst.max(dist);
            remaining.swap_remove(idx);
        }
        Some(worst)
    }

    pub fn matches(&self, other: &ComplexSpectrum, tol: f64) -> bool {
        self.match_distance(other).is_some_and(|d| d <= tol)
    }
}

/// All eigenvalues of a square matrix, with multiplicity, in no particular order.
pub fn eigenvalues_dense(m: &Matrix) -> Result<ComplexSpectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_DENSE_DIM {
        return Err(Error::Precondition(format!(
            "dense eigensolver is limited to {MAX_DENSE_DIM}x{MAX_DENSE_DIM}, got {n}x{n}"
        )));
    }
    if n == 0 {
        return Ok(ComplexSpectrum::new(Vec::new()));
    }
    let mut a = OneBased::from_matrix(m);
    balance(&mut a);
    hessenberg(&mut a);
    let (wr, wi) = hqr(&mut a)?;
    Ok(ComplexSpectrum::new(
        wr.into_iter()
            .zip(wi)
            .map(|(re, im)| Complex64::new(re, im))
            .collect(),
    ))
}

/// Square scratch matrix indexed from 1, which keeps the QR sweep close to
/// its textbook form.
struct OneBased {
    n: usize,
    data: Vec<f64>,
}

impl OneBased {
    fn from_matrix(m: &Matrix) -> Self {
        let n = m.rows();
        let mut data = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                data[(i + 1) * (n + 1) + j + 1] = m[(i, j)];
            }
        }
        Self { n, data }
    }
}

impl std::ops::Index<(usize, usize)> for OneBased {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * (self.n + 1) + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for OneBased {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * (self.n + 1) + j]
    }
}

fn balance(a: &mut OneBased) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[(i, j)] *= g;
                    }
                    for j in 1..=n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Householder similarity reduction to upper Hessenberg form.
fn hessenberg(a: &mut OneBased) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n + 1];
    for k in 1..=n - 2 {
        let scale: f64 = (k + 1..=n).map(|i| a[(i, k)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut sigma = 0.0;
        for i in k + 1..=n {
            v[i] = a[(i, k)] / scale;
            sigma += v[i] * v[i];
        }
        let alpha = -v[k + 1].signum() * sigma.sqrt();
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..=n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A <- (I - 2vvᵀ/vᵀv) A
        for j in 1..=n {
            let s: f64 = (k + 1..=n).map(|i| v[i] * a[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k + 1..=n {
                a[(i, j)] -= s * v[i];
            }
        }
        // A <- A (I - 2vvᵀ/vᵀv)
        for i in 1..=n {
            let s: f64 = (k + 1..=n).map(|j| a[(i, j)] * v[j]).sum::<f64>() * 2.0 / vnorm2;
            for j in k + 1..=n {
                a[(i, j)] -= s * v[j];
            }
        }
        for i in k + 2..=n {
            a[(i, k)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
fn hqr(a: &mut OneBased) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = a.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[(i, j)].abs();
        }
    }

    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l >= 2 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() + s == s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[(nn, nn)];
            if l == nn {
                // one root found
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = a[(nn - 1, nn - 1)];
            w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
            if l == nn - 1 {
                // two roots found
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_QR_ITERATIONS {
                return Err(Error::NoConvergence {
                    algorithm: "Hessenberg QR",
                    rows: n,
                    cols: n,
                    iterations: its,
                });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 1..=nn {
                    a[(i, i)] -= x;
                }
                let s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = nn - 2;
            loop {
                z = a[(m, m)];
                r = x - z;
                let s = y - z;
                p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r - s;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..nn and columns m..nn
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a[(k, j)] + q * a[(k + 1, j)];
                        if k != nn - 1 {
                            p += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= p * z;
                        }
                        a[(k + 1, j)] -= p * y;
                        a[(k, j)] -= p * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        p = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k != nn - 1 {
                            p += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= p * r;
                        }
                        a[(i, k + 1)] -= p * q;
                        a[(i, k)] -= p;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    wr.remove(0);
    wi.remove(0);
    Ok((wr, wi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn companion(roots: &[Complex64]) -> Matrix {
        // monic polynomial coefficients, highest degree first
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            coeffs = next;
        }
        let deg = roots.len();
        let mut m = Matrix::zeros(deg, deg);
        for j in 0..deg {
            let c = coeffs[j + 1];
            assert!(c.im.abs() < 1e-12, "roots must be conjugate-closed");
            m[(0, j)] = -c.re;
        }
        for i in 1..deg {
            m[(i, i - 1)] = 1.0;
        }
        m
    }

    #[test]
    fn diagonal() {
        let s = eigenvalues_dense(&Matrix::diag(&[1.0, 2.0, 3.0])).unwrap();
        assert!(s.matches(&ComplexSpectrum::from_real([1.0, 2.0, 3.0]), 1e-14));
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let s = eigenvalues_dense(&m).unwrap();
        let expected = ComplexSpectrum::new(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]);
        assert!(s.matches(&expected, 1e-14), "{s:?}");
    }

    #[test]
    fn companion_matrices_reproduce_roots() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let cases: Vec<Vec<Complex64>> = vec![
            vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.5, 0.0)],
            vec![c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0), c(-1.5, 0.0)],
            vec![c(1.0, 2.0), c(1.0, -2.0), c(-0.5, 0.5), c(-0.5, -0.5), c(2.0, 0.0)],
            vec![
                c(-2.0, 0.0),
                c(-1.0, 0.0),
                c(0.5, 0.0),
                c(1.0, 0.0),
                c(1.5, 0.0),
                c(3.0, 0.0),
                c(0.0, 1.0),
                c(0.0, -1.0),
            ],
            vec![
                c(0.3, 0.9),
                c(0.3, -0.9),
                c(-0.8, 0.2),
                c(-0.8, -0.2),
                c(1.2, 0.0),
                c(-0.1, 0.0),
                c(2.5, 0.4),
                c(2.5, -0.4),
            ],
        ];
        for roots in cases {
            let s = eigenvalues_dense(&companion(&roots)).unwrap();
            let dist = s.match_distance(&ComplexSpectrum::new(roots.clone())).unwrap();
            assert!(dist < 1e-8, "roots {roots:?} reproduced to {dist}");
        }
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            eigenvalues_dense(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn spectrum_is_conjugate_closed() {
        let m = Matrix::from_rows(&[
            vec![1.0, 2.0, -1.0, 0.5],
            vec![-3.0, 0.2, 1.0, 1.0],
            vec![0.0, 1.5, -0.7, 2.0],
            vec![1.0, -1.0, 0.3, 0.1],
        ])
        .unwrap();
        let s = eigenvalues_dense(&m).unwrap();
        let conj = ComplexSpectrum::new(s.eigenvalues.iter().map(|z| z.conj()).collect());
        assert!(s.matches(&conj, 1e-12));
        // trace is preserved
        let tr: f64 = s.eigenvalues.iter().map(|z| z.re).sum();
        assert!((tr - 0.6).abs() < 1e-12);
    }

    #[test]
    fn match_distance_handles_conjugate_order() {
        let a = ComplexSpectrum::new(vec![Complex64::new(0.5, 0.3), Complex64::new(0.5, -0.3)]);
        let b = ComplexSpectrum::new(vec![
            Complex64::new(0.5 + 1e-16, -0.3),
            Complex64::new(0.5, 0.3),
        ]);
        assert!(a.match_distance(&b).unwrap() < 1e-15);
        assert!(a.match_distance(&ComplexSpectrum::new(vec![])).is_none());
    }
}
