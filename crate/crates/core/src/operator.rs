//! Finite-difference discretisation of the stochastic operators
//!
//! ```text
//! S_{beta,k} = -d^2/dx^2 + x^{1/(2k+1)} + (2/sqrt(beta)) x^{-k/(2k+1)} W'(x)
//! ```
//!
//! on `(0, L)` with Dirichlet conditions at both ends, together with the
//! rescaled operators `H^p` and the deterministic gap `gamma H_{beta2} - H^p_{beta1}`
//! that orders them.
//!
//! White noise is cell-averaged: node `x_i = i h` receives
//! `sqrt(v) / h * g_i`, where `v` is the exact integral of `x^{-2k/(2k+1)}`
//! over the cell `[x_i - h, x_i]` and `g_i` is standard normal. The
//! integral is finite on the first cell even though the noise coefficient
//! blows up at the origin.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tridiag::{SymTridiagonal, Which};

/// Bisection tolerance for operator ground states. Matrix norms here are
/// of order `1/h^2`, so this lands at the floating-point floor.
pub const OPERATOR_EIG_TOL: f64 = 1e-15;

/// Default truncation length.
pub const DEFAULT_LENGTH: f64 = 20.0;
/// Default grid step.
pub const DEFAULT_STEP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorGrid {
    k: u32,
    step: f64,
    cells: usize,
}

impl OperatorGrid {
    /// Grid on `[0, L]` with step `h`. `L` is cut down to a whole number of
    /// cells; the interior nodes are `x_i = i h`, `i = 1..N-1`.
    pub fn new(k: u32, length: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && length > 0.0 && step.is_finite() && length.is_finite()) {
            return Err(Error::param(format!(
                "grid needs L > 0 and h > 0, got L={length} h={step}"
            )));
        }
        if step >= length {
            return Err(Error::param(format!("grid needs h < L, got L={length} h={step}")));
        }
        let ratio = length / step;
        let nearest = ratio.round();
        let cells = if (ratio - nearest).abs() <= 1e-9 * ratio {
            nearest
        } else {
            ratio.floor()
        } as usize;
        if cells < 2 {
            return Err(Error::param("grid needs at least one interior node"));
        }
        Ok(Self { k, step, cells })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `N h`, the position of the right Dirichlet boundary.
    pub fn length(&self) -> f64 {
        self.cells as f64 * self.step
    }

    /// Number of cells `N`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Number of interior nodes, `N - 1`.
    pub fn interior(&self) -> usize {
        self.cells - 1
    }

    /// `2k + 1`.
    pub fn order(&self) -> f64 {
        (2 * self.k + 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    /// Interior nodes `x_1, ..., x_{N-1}`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.cells).map(|i| self.node(i))
    }

    /// `x^{1/(2k+1)}` at every interior node.
    fn potential(&self) -> Vec<f64> {
        let q = self.order();
        self.nodes().map(|x| x.powf(1.0 / q)).collect()
    }
}

/// Shared noise for one realisation of the operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisePath {
    g: Vec<f64>,
    cell_weights: Vec<f64>,
}

impl NoisePath {
    /// Builds a path from given normals, mainly for deterministic checks.
    pub fn from_normals(grid: &OperatorGrid, g: Vec<f64>) -> Result<Self> {
        if g.len() != grid.interior() {
            return Err(Error::param(format!(
                "noise needs {} normals, got {}",
                grid.interior(),
                g.len()
            )));
        }
        Ok(Self {
            g,
            cell_weights: cell_weights(grid),
        })
    }

    pub fn zero(grid: &OperatorGrid) -> Self {
        Self {
            g: vec![0.0; grid.interior()],
            cell_weights: cell_weights(grid),
        }
    }

    /// Standard normals, one per interior node.
    pub fn normals(&self) -> &[f64] {
        &self.g
    }

    /// `v_j = (2k+1) ((x_j + h)^{1/(2k+1)} - x_j^{1/(2k+1)})` for every cell
    /// `[x_j, x_j + h]`, `j = 0..N-1`.
    pub fn cell_weights(&self) -> &[f64] {
        &self.cell_weights
    }

    /// `sqrt(v) / h` for the cell to the left of each interior node.
    fn node_scales(&self, step: f64) -> Vec<f64> {
        self.cell_weights[..self.g.len()]
            .iter()
            .map(|v| v.sqrt() / step)
            .collect()
    }
}

fn cell_weights(grid: &OperatorGrid) -> Vec<f64> {
    let q = grid.order();
    let h = grid.step();
    (0..grid.cells())
        .map(|j| {
            let left = j as f64 * h;
            q * ((left + h).powf(1.0 / q) - left.powf(1.0 / q))
        })
        .collect()
}

/// Draws `N - 1` independent standard normals.
pub fn build_noise(grid: &OperatorGrid, stream: &mut RngStream) -> NoisePath {
    let g = (0..grid.interior()).map(|_| stream.standard_normal()).collect();
    NoisePath {
        g,
        cell_weights: cell_weights(grid),
    }
}

/// `2 / sqrt(p^{1/(2k+1)} beta)`, the white-noise amplitude of `H^p_beta`.
pub fn noise_amplitude(k: u32, beta: f64, p: f64) -> f64 {
    let q = (2 * k + 1) as f64;
    2.0 / (p.powf(1.0 / q) * beta).sqrt()
}

/// A discretised operator kept in affine form: a deterministic
/// tridiagonal part plus `amplitude * (sqrt(v_i)/h) * g_i` on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedOperator {
    deterministic_diag: Vec<f64>,
    offdiag: f64,
    amplitude: f64,
    node_scales: Vec<f64>,
    normals: Vec<f64>,
}

impl DiscretizedOperator {
    pub fn deterministic_diag(&self) -> &[f64] {
        &self.deterministic_diag
    }

    /// The constant off-diagonal entry.
    pub fn offdiag(&self) -> f64 {
        self.offdiag
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Coefficient multiplying `g_i` in diagonal entry `i`.
    pub fn noise_coefficients(&self) -> Vec<f64> {
        self.node_scales.iter().map(|s| self.amplitude * s).collect()
    }

    /// `factor * self`, applied to every component.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            deterministic_diag: self.deterministic_diag.iter().map(|d| factor * d).collect(),
            offdiag: factor * self.offdiag,
            amplitude: factor * self.amplitude,
            node_scales: self.node_scales.clone(),
            normals: self.normals.clone(),
        }
    }

    pub fn matrix(&self) -> SymTridiagonal {
        let coeffs = self.noise_coefficients();
        let diag = self
            .deterministic_diag
            .iter()
            .zip(&coeffs)
            .zip(&self.normals)
            .map(|((d, c), g)| d + c * g)
            .collect();
        let offdiag = vec![self.offdiag; self.deterministic_diag.len() - 1];
        SymTridiagonal::new(diag, offdiag).expect("operator entries are finite")
    }

    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        self.matrix().extremal_eigenvalue(Which::Smallest, OPERATOR_EIG_TOL)
    }
}

/// `H^p_beta` on the grid:
/// `-p d^2/dy^2 + p^{-(2k+2)/(2k+1)} y^{1/(2k+1)} + (2/sqrt(p^{1/(2k+1)} beta)) y^{-k/(2k+1)} W'(y)`.
pub fn rescaled_operator(grid: &OperatorGrid, beta: f64, p: f64, noise: &NoisePath) -> Result<DiscretizedOperator> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param(format!("beta must be positive, got {beta}")));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::param(format!("rescaling p must be positive, got {p}")));
    }
    if noise.normals().len() != grid.interior() || noise.cell_weights().len() != grid.cells() {
        return Err(Error::param("noise path does not match grid"));
    }
    let q = grid.order();
    let h2 = grid.step() * grid.step();
    let potential_scale = if p == 1.0 { 1.0 } else { p.powf(-(q + 1.0) / q) };
    let deterministic_diag = grid
        .potential()
        .into_iter()
        .map(|v| 2.0 * p / h2 + potential_scale * v)
        .collect();
    Ok(DiscretizedOperator {
        deterministic_diag,
        offdiag: -p / h2,
        amplitude: noise_amplitude(grid.k(), beta, p),
        node_scales: noise.node_scales(grid.step()),
        normals: noise.normals().to_vec(),
    })
}

/// `-Delta_h + x^{1/(2k+1)} + (2/sqrt(beta)) (sqrt(v_i)/h) g_i`.
pub fn discretize(grid: &OperatorGrid, beta: f64, noise: &NoisePath) -> Result<DiscretizedOperator> {
    rescaled_operator(grid, beta, 1.0, noise)
}

/// One draw of `TW_{beta,k}`: minus the ground-state eigenvalue.
pub fn sample_tw(grid: &OperatorGrid, beta: f64, stream: &mut RngStream) -> Result<f64> {
    let noise = build_noise(grid, stream);
    Ok(-discretize(grid, beta, &noise)?.smallest_eigenvalue()?)
}

fn check_ordered(beta1: f64, beta2: f64) -> Result<()> {
    if !(beta1 > 0.0 && beta1.is_finite() && beta2.is_finite()) || beta2 < beta1 {
        return Err(Error::param(format!(
            "need beta2 >= beta1 > 0, got beta1={beta1} beta2={beta2}"
        )));
    }
    Ok(())
}

/// Range of `p` for which both coefficients of the ordering gap are nonnegative:
/// `((b1/b2)^{(2k+1)/(4k+3)}, (b2/b1)^{(2k+1)/(4k+3)})`.
pub fn admissible_p_range(k: u32, beta1: f64, beta2: f64) -> Result<(f64, f64)> {
    check_ordered(beta1, beta2)?;
    let e = (2 * k + 1) as f64 / (4 * k + 3) as f64;
    let r = beta2 / beta1;
    Ok((r.powf(-e), r.powf(e)))
}

/// Corresponding range of `alpha = p gamma`:
/// `((b2/b1)^{1/(4k+3)}, (b2/b1)^{(4k+2)/(4k+3)})`.
pub fn alpha_range(k: u32, beta1: f64, beta2: f64) -> Result<(f64, f64)> {
    check_ordered(beta1, beta2)?;
    let d = (4 * k + 3) as f64;
    let r = beta2 / beta1;
    Ok((r.powf(1.0 / d), r.powf((4 * k + 2) as f64 / d)))
}

/// Exponent pair `(1/(4k+3), (4k+2)/(4k+3))` bounding admissible `s`.
pub fn s_range(k: u32) -> (f64, f64) {
    let d = (4 * k + 3) as f64;
    (1.0 / d, (4 * k + 2) as f64 / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorCouplingSpec {
    pub k: u32,
    pub beta1: f64,
    pub beta2: f64,
    pub p: f64,
    /// `sqrt(beta2 / (p^{1/(2k+1)} beta1))`.
    pub gamma: f64,
    /// `p * gamma`.
    pub alpha: f64,
    /// Exponent with `alpha = (beta2/beta1)^s`; undefined when the betas agree.
    pub s: Option<f64>,
}

impl OperatorCouplingSpec {
    pub fn from_p(k: u32, beta1: f64, beta2: f64, p: f64) -> Result<Self> {
        check_ordered(beta1, beta2)?;
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::param(format!("p must be positive, got {p}")));
        }
        // ratio of noise amplitudes, so gamma * amp(beta2) reproduces amp^p(beta1)
        let gamma = noise_amplitude(k, beta1, p) / noise_amplitude(k, beta2, 1.0);
        let alpha = p * gamma;
        let r = beta2 / beta1;
        let s = (r != 1.0).then(|| alpha.ln() / r.ln());
        Ok(Self {
            k,
            beta1,
            beta2,
            p,
            gamma,
            alpha,
            s,
        })
    }

    /// Solves `alpha(p) = (beta2/beta1)^s` for `p`.
    pub fn from_s(k: u32, beta1: f64, beta2: f64, s: f64) -> Result<Self> {
        check_ordered(beta1, beta2)?;
        let q = (2 * k + 1) as f64;
        let r = beta2 / beta1;
        // alpha = r^{1/2} p^{(2q-1)/(2q)}
        let p = r.powf((s - 0.5) * 2.0 * q / (2.0 * q - 1.0));
        Self::from_p(k, beta1, beta2, p)
    }

    /// `gamma - p`, the Laplacian coefficient of the gap.
    pub fn laplacian_coefficient(&self) -> f64 {
        self.gamma - self.p
    }

    /// `gamma - p^{-(2k+2)/(2k+1)}`, the potential coefficient of the gap.
    pub fn potential_coefficient(&self) -> f64 {
        let q = (2 * self.k + 1) as f64;
        self.gamma - self.p.powf(-(q + 1.0) / q)
    }

    pub fn in_admissible_range(&self) -> bool {
        match admissible_p_range(self.k, self.beta1, self.beta2) {
            Ok((lo, hi)) => {
                let slack = 1e-12;
                self.p >= lo * (1.0 - slack) && self.p <= hi * (1.0 + slack)
            }
            Err(_) => false,
        }
    }
}

/// `gamma H_{beta2} - H^p_{beta1}` with shared noise: the noise cancels and
/// what remains is `-(gamma - p) d^2/dy^2 + (gamma - p^{-(2k+2)/(2k+1)}) y^{1/(2k+1)}`.
pub fn ordering_gap(spec: &OperatorCouplingSpec, grid: &OperatorGrid) -> Result<SymTridiagonal> {
    if spec.k != grid.k() {
        return Err(Error::param(format!("spec k={} but grid k={}", spec.k, grid.k())));
    }
    let a = spec.laplacian_coefficient();
    let b = spec.potential_coefficient();
    let h2 = grid.step() * grid.step();
    let diag = grid.potential().into_iter().map(|v| 2.0 * a / h2 + b * v).collect();
    let offdiag = vec![-a / h2; grid.interior() - 1];
    SymTridiagonal::new(diag, offdiag)
}

/// Shared-noise pair `(lambda_min(H^p_{beta1}), lambda_min(gamma H_{beta2}))`.
/// The second is never below the first when `p` is admissible.
pub fn coupled_tw_pair(spec: &OperatorCouplingSpec, grid: &OperatorGrid, stream: &mut RngStream) -> Result<(f64, f64)> {
    if spec.k != grid.k() {
        return Err(Error::param(format!("spec k={} but grid k={}", spec.k, grid.k())));
    }
    if !spec.in_admissible_range() {
        return Err(Error::param(format!("p={} lies outside the admissible range", spec.p)));
    }
    let noise = build_noise(grid, stream);
    let rescaled = rescaled_operator(grid, spec.beta1, spec.p, &noise)?;
    let scaled = discretize(grid, spec.beta2, &noise)?.scaled(spec.gamma);
    Ok((rescaled.smallest_eigenvalue()?, scaled.smallest_eigenvalue()?))
}
