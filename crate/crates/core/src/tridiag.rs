//! Extremal eigenpairs of real symmetric tridiagonal matrices.
//!
//! Eigenvalues come from bisection on Sturm counts inside the Gershgorin
//! interval, which gives a guaranteed bracket at every step. The top
//! eigenvector comes from inverse iteration with a shift just above the
//! computed eigenvalue.

use crate::ensembles::LaguerreSample;
use crate::error::{Error, Result};

/// Default bisection tolerance, relative to `max(1, Gershgorin radius)`.
pub const DEFAULT_TOL: f64 = 1e-12;

const BISECTION_MAX_ITER: usize = 200;
const INVERSE_ITER_MAX: usize = 50;
const SHIFT_OFFSET: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Smallest,
    Largest,
}

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::param("tridiagonal matrix must have n >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::param(format!(
                "off-diagonal length {} does not match n - 1 = {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::param("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    /// `B^T B` for the lower-bidiagonal `B` with diagonal `z` and
    /// subdiagonal `w`.
    pub fn gram_of_lower_bidiagonal(z: &[f64], w: &[f64]) -> Result<Self> {
        let n = z.len();
        if n == 0 || w.len() + 1 != n {
            return Err(Error::param(
                "bidiagonal needs n >= 1 diagonal and n - 1 subdiagonal entries",
            ));
        }
        let diag = (0..n).map(|i| z[i] * z[i] + w.get(i).map_or(0.0, |x| x * x)).collect();
        let offdiag = (0..n - 1).map(|i| z[i + 1] * w[i]).collect();
        Self::new(diag, offdiag)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Top-left `k x k` principal submatrix.
    pub fn principal_corner(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::param(format!("corner size {k} outside 1..={}", self.len())));
        }
        Ok(Self {
            diag: self.diag[..k].to_vec(),
            offdiag: self.offdiag[..k - 1].to_vec(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            diag: self.diag.iter().map(|d| factor * d).collect(),
            offdiag: self.offdiag.iter().map(|e| factor * e).collect(),
        }
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::param("matrix sizes differ"));
        }
        let diag = self.diag.iter().zip(&other.diag).map(|(a, b)| a - b).collect();
        let offdiag = self.offdiag.iter().zip(&other.offdiag).map(|(a, b)| a - b).collect();
        Self::new(diag, offdiag)
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Max-row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n, "vector length must match matrix size");
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Number of eigenvalues strictly below `x`, read off the signs of the
    /// `LDL^T` pivots of `T - xI`. Pivots that fall below `eps * scale` in
    /// magnitude are replaced by `-eps * scale`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.offdiag[i - 1];
            q = (self.diag[i] - x) - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Smallest or largest eigenvalue, accurate to `tol * max(1, R)` where
    /// `R` is the larger magnitude of the Gershgorin endpoints.
    pub fn extremal_eigenvalue(&self, which: Which, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::param(format!("tolerance must be positive, got {tol}")));
        }
        let n = self.len();
        if n == 1 {
            return Ok(self.diag[0]);
        }
        let (g_lo, g_hi) = self.gershgorin();
        let radius = g_lo.abs().max(g_hi.abs());
        let width = tol * radius.max(1.0);
        let mut lo = g_lo - f64::EPSILON * radius.max(1.0);
        let mut hi = g_hi + f64::EPSILON * radius.max(1.0);
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= width || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            let count = self.sturm_count(mid);
            let above = match which {
                Which::Largest => count >= n,
                Which::Smallest => count >= 1,
            };
            if above {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::numerical(
            "extremal_eigenvalue",
            format!(
                "bisection did not reach width {width:e} in {BISECTION_MAX_ITER} steps (n={n}, bracket [{lo}, {hi}])"
            ),
        ))
    }

    pub fn largest_eigenvalue(&self) -> Result<f64> {
        self.extremal_eigenvalue(Which::Largest, DEFAULT_TOL)
    }

    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        self.extremal_eigenvalue(Which::Smallest, DEFAULT_TOL)
    }

    /// Unit eigenvector for the largest eigenvalue `lambda`, by inverse
    /// iteration shifted to `lambda + 1e-10 * scale`. The sign is chosen so
    /// that the largest-magnitude component is positive.
    pub fn top_eigenvector(&self, lambda: f64, tol: f64) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 1 {
            return Ok(vec![1.0]);
        }
        let scale = self.norm_inf().max(1.0);
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut offset = SHIFT_OFFSET * scale;
        let mut attempts = 0;
        let mut iter = 0;
        while iter < INVERSE_ITER_MAX {
            let Some(mut y) = self.shifted_solve(lambda + offset, &v) else {
                attempts += 1;
                if attempts > 5 {
                    return Err(Error::numerical(
                        "top_eigenvector",
                        format!("shifted system singular near lambda={lambda} after {attempts} jitters"),
                    ));
                }
                offset *= 10.0;
                continue;
            };
            let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            y.iter_mut().for_each(|a| *a /= norm);
            fix_sign(&mut y);
            let delta = y.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = y;
            iter += 1;
            if delta <= tol {
                break;
            }
        }
        Ok(v)
    }

    /// Solves `(T - shift I) y = rhs` by Gaussian elimination without
    /// pivoting. Returns `None` on a zero or non-finite pivot.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut pivot = self.diag[0] - shift;
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        y[0] = rhs[0] / pivot;
        for i in 1..n {
            c[i - 1] = self.offdiag[i - 1] / pivot;
            pivot = (self.diag[i] - shift) - self.offdiag[i - 1] * c[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            y[i] = (rhs[i] - self.offdiag[i - 1] * y[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y.iter().all(|a| a.is_finite()).then_some(y)
    }

    /// `||T v - lambda v||_inf`.
    pub fn residual_inf(&self, lambda: f64, v: &[f64]) -> f64 {
        self.matvec(v)
            .iter()
            .zip(v)
            .map(|(tv, x)| (tv - lambda * x).abs())
            .fold(0.0, f64::max)
    }
}

fn fix_sign(v: &mut [f64]) {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `B^T B` of a Laguerre sample's (unnormalized) bidiagonal matrix.
pub fn gram_tridiagonal(sample: &LaguerreSample) -> SymTridiagonal {
    SymTridiagonal::gram_of_lower_bidiagonal(sample.diag(), sample.subdiag())
        .expect("LaguerreSample shapes are validated at construction")
}
