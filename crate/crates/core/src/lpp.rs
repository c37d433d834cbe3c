//! Exponential last-passage percolation on the first quadrant.
//!
//! Weights are drawn in row-major scan order from the stream and consumed
//! by a rolling-row dynamic program, so a run is a pure function of the
//! stream position.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LppModel {
    /// `G(1, (n, n))` with i.i.d. weights.
    PointToPoint,
    /// Maximum of `G(1, u)` over the antidiagonal `u1 + u2 = 2n`.
    PointToLine,
    /// `G(1, (2n, 2n))` with symmetric weights and a zero diagonal.
    Symmetrized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LppConfig {
    pub model: LppModel,
    pub n: usize,
    pub rate: f64,
}

impl LppConfig {
    pub fn new(model: LppModel, n: usize) -> Result<Self> {
        Self::with_rate(model, n, 1.0)
    }

    pub fn with_rate(model: LppModel, n: usize, rate: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("last passage needs n >= 1"));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("weight rate must be positive, got {rate}")));
        }
        Ok(Self { model, n, rate })
    }

    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        let t = match self.model {
            LppModel::PointToPoint => lpp_point_to_point(self.n, stream),
            LppModel::PointToLine => lpp_point_to_line(self.n, stream),
            LppModel::Symmetrized => lpp_symmetrized(self.n, stream),
        };
        // Exp(rate) = Exp(1) / rate and the passage time is linear in the weights
        t / self.rate
    }
}

/// Last-passage time from `(1, 1)` to `(rows, cols)` over a field given in
/// row-major order.
pub fn last_passage_time(rows: usize, cols: usize, mut weight: impl FnMut(usize, usize) -> f64) -> f64 {
    let mut g = vec![0.0_f64; cols + 1];
    for i in 1..=rows {
        for j in 1..=cols {
            g[j] = weight(i, j) + g[j].max(g[j - 1]);
        }
    }
    g[cols]
}

/// `G^□(1, (n, n))` with i.i.d. Exp(1) weights.
pub fn lpp_point_to_point(n: usize, stream: &mut RngStream) -> f64 {
    last_passage_time(n, n, |_, _| stream.exp1())
}

/// Point-to-line time over a field given in row-major order: the DP runs
/// over the triangle `i + j <= 2n` and the maximum is taken over `i + j = 2n`.
pub fn point_to_line_time(n: usize, mut weight: impl FnMut(usize, usize) -> f64) -> f64 {
    let side = 2 * n - 1;
    let mut g = vec![0.0_f64; side + 1];
    let mut best = f64::NEG_INFINITY;
    for i in 1..=side {
        let width = 2 * n - i;
        for j in 1..=width {
            g[j] = weight(i, j) + g[j].max(g[j - 1]);
        }
        best = best.max(g[width]);
    }
    best
}

/// `G^⊠(1, n)` with i.i.d. Exp(1) weights.
pub fn lpp_point_to_line(n: usize, stream: &mut RngStream) -> f64 {
    point_to_line_time(n, |_, _| stream.exp1())
}

/// Symmetric weight field on `[1..2n]^2`: `zeta(i, j) = zeta(j, i)` drawn
/// once per unordered pair in row-major order of `(min, max)`, and
/// `zeta(i, i) = 0`. Returned as a dense row-major `2n x 2n` matrix.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_field(n: usize, stream: &mut RngStream) -> Vec<Vec<f64>> {
    let side = 2 * n;
    let mut field = vec![vec![0.0; side]; side];
    for i in 0..side {
        for j in i + 1..side {
            let w = stream.exp1();
            field[i][j] = w;
            field[j][i] = w;
        }
    }
    field
}

/// `G^⧄(1, (2n, 2n))`.
pub fn lpp_symmetrized(n: usize, stream: &mut RngStream) -> f64 {
    let field = symmetric_field(n, stream);
    let side = 2 * n;
    last_passage_time(side, side, |i, j| field[i - 1][j - 1])
}
