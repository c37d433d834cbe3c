#![allow(dead_code)]

use betadom::stats::EmpiricalDistribution;
use betadom::{RngStream, SymTridiagonal};
use nalgebra::DMatrix;

pub const LEVEL: f64 = 0.001;

pub fn draws(n: usize, seed: u64, mut f: impl FnMut(&mut RngStream) -> f64) -> EmpiricalDistribution {
    let mut s = RngStream::new(seed, 0);
    EmpiricalDistribution::new((0..n).map(|_| f(&mut s)).collect()).unwrap()
}

pub fn dense(t: &SymTridiagonal) -> DMatrix<f64> {
    let n = t.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = t.diag()[i];
        if i + 1 < n {
            m[(i, i + 1)] = t.offdiag()[i];
            m[(i + 1, i)] = t.offdiag()[i];
        }
    }
    m
}

/// Ascending eigenvalues from a dense symmetric solver.
pub fn dense_eigenvalues(t: &SymTridiagonal) -> Vec<f64> {
    let mut ev: Vec<f64> = dense(t).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn random_tridiagonal(n: usize, s: &mut RngStream, positive_off: bool) -> SymTridiagonal {
    let diag = (0..n).map(|_| 3.0 * s.standard_normal()).collect();
    let offdiag = (1..n)
        .map(|_| {
            let x = s.standard_normal();
            if positive_off {
                x.abs() + 0.05
            } else {
                x
            }
        })
        .collect();
    SymTridiagonal::new(diag, offdiag).unwrap()
}
