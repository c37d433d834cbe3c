//! Tridiagonal Hermite and bidiagonal Laguerre beta-ensemble models, their
//! couplings across `beta`, and the soft-edge scalings.
//!
//! All matrices are stored without the `1/sqrt(beta)` prefactor. Coupled
//! pairs share their diagonal normals, and that sharing only makes sense
//! before normalization: the pathwise comparison is between raw largest
//! eigenvalues. Convert with [`HermiteSample::lambda1`] (divides by
//! `sqrt(beta)`) or [`LaguerreSample::lambda1`] (divides by `beta`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{ChiDof, RngStream};
use crate::tridiag::{SymTridiagonal, Which};

/// Bisection tolerance used when comparing coupled eigenvalues.
pub const COUPLING_EIG_TOL: f64 = 1e-14;

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("beta must be positive and finite, got {beta}")))
    }
}

fn dof(x: f64) -> Result<ChiDof> {
    ChiDof::new(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteSample {
    n: usize,
    beta: f64,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl HermiteSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn matrix(&self) -> SymTridiagonal {
        SymTridiagonal::new(self.diag.clone(), self.offdiag.clone()).expect("sampler produces consistent shapes")
    }

    /// Largest eigenvalue of the stored (unnormalized) matrix.
    pub fn lambda1_raw(&self) -> Result<f64> {
        self.matrix().extremal_eigenvalue(Which::Largest, COUPLING_EIG_TOL)
    }

    /// Largest eigenvalue of the Hermite ensemble, `lambda1_raw / sqrt(beta)`.
    pub fn lambda1(&self) -> Result<f64> {
        Ok(self.lambda1_raw()? / self.beta.sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaguerreSample {
    n: usize,
    kappa: f64,
    beta: f64,
    diag: Vec<f64>,
    subdiag: Vec<f64>,
}

impl LaguerreSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The `Z` entries.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// The `W` entries.
    pub fn subdiag(&self) -> &[f64] {
        &self.subdiag
    }

    pub fn gram(&self) -> SymTridiagonal {
        crate::tridiag::gram_tridiagonal(self)
    }

    /// Largest eigenvalue of `B^T B` for the stored (unnormalized) `B`.
    pub fn lambda1_raw(&self) -> Result<f64> {
        self.gram().extremal_eigenvalue(Which::Largest, COUPLING_EIG_TOL)
    }

    /// Largest eigenvalue of the Laguerre ensemble, `lambda1_raw / beta`.
    pub fn lambda1(&self) -> Result<f64> {
        Ok(self.lambda1_raw()? / self.beta)
    }
}

/// Hermite model: diagonal `N(0, 2)`, off-diagonal `i` (1-based) `chi_{beta(n-i)}`.
pub fn sample_hermite(n: usize, beta: f64, stream: &mut RngStream) -> Result<HermiteSample> {
    if n == 0 {
        return Err(Error::param("hermite sample needs n >= 1"));
    }
    check_beta(beta)?;
    let diag = (0..n)
        .map(|_| std::f64::consts::SQRT_2 * stream.standard_normal())
        .collect();
    let offdiag = (1..n)
        .map(|i| Ok(stream.chi(dof(beta * (n - i) as f64)?)))
        .collect::<Result<_>>()?;
    Ok(HermiteSample { n, beta, diag, offdiag })
}

/// Laguerre model: `Z_i ~ chi_{beta(kappa-i+1)}`, `W_i ~ chi_{beta(n-i)}`.
pub fn sample_laguerre(n: usize, kappa: f64, beta: f64, stream: &mut RngStream) -> Result<LaguerreSample> {
    if n == 0 {
        return Err(Error::param("laguerre sample needs n >= 1"));
    }
    check_beta(beta)?;
    if !(kappa > (n - 1) as f64) || !kappa.is_finite() {
        return Err(Error::param(format!(
            "laguerre needs kappa > n - 1 = {}, got {kappa}",
            n - 1
        )));
    }
    let diag = (1..=n)
        .map(|i| Ok(stream.chi(dof(beta * (kappa - i as f64 + 1.0))?)))
        .collect::<Result<_>>()?;
    let subdiag = (1..n)
        .map(|i| Ok(stream.chi(dof(beta * (n - i) as f64)?)))
        .collect::<Result<_>>()?;
    Ok(LaguerreSample {
        n,
        kappa,
        beta,
        diag,
        subdiag,
    })
}

/// Parameters of the Hermite coupling. `beta2 = m * beta1 / n` is derived,
/// never supplied, so `m beta1 = n beta2` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermiteCoupleSpec {
    pub m: usize,
    pub n: usize,
    pub beta1: f64,
    pub beta2: f64,
}

impl HermiteCoupleSpec {
    pub fn new(m: usize, n: usize, beta1: f64) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::param(format!("coupling needs m >= n >= 1, got m={m} n={n}")));
        }
        check_beta(beta1)?;
        let beta2 = beta1 * (m as f64 / n as f64);
        Ok(Self { m, n, beta1, beta2 })
    }

    /// `beta2 * n`, the common value of `beta1 * m` and `beta2 * n`.
    fn total(&self) -> f64 {
        self.beta2 * self.n as f64
    }

    /// Dof pairs `(beta1 (m - i), beta2 (n - i))` for the coupled
    /// off-diagonal entries `i = 1..n-1`.
    pub fn coupled_offdiag_dofs(&self) -> Vec<(f64, f64)> {
        let c = self.total();
        (1..self.n)
            .map(|i| (c - i as f64 * self.beta1, c - i as f64 * self.beta2))
            .collect()
    }
}

/// Parameters of the Laguerre coupling between `B_{m, m kappa / n, beta1}`
/// and `B_{n, kappa, beta2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaguerreCoupleSpec {
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl LaguerreCoupleSpec {
    pub fn new(m: usize, n: usize, kappa: f64, beta1: f64) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::param(format!("coupling needs m >= n >= 1, got m={m} n={n}")));
        }
        check_beta(beta1)?;
        let spec = Self {
            m,
            n,
            kappa,
            beta1,
            beta2: beta1 * (m as f64 / n as f64),
        };
        if !(kappa > (n - 1) as f64) || !kappa.is_finite() {
            return Err(Error::param(format!(
                "coupling needs kappa > n - 1 = {}, got {kappa}",
                n - 1
            )));
        }
        if !(spec.kappa_upper() > (m - 1) as f64) {
            return Err(Error::param(format!(
                "coupling needs m kappa / n = {} > m - 1 = {}",
                spec.kappa_upper(),
                m - 1
            )));
        }
        Ok(spec)
    }

    /// `m kappa / n`, the kappa of the dominating ensemble.
    pub fn kappa_upper(&self) -> f64 {
        self.kappa * (self.m as f64 / self.n as f64)
    }

    /// Dof pairs for the coupled diagonal entries `i = 1..n`:
    /// `(beta1 (m kappa/n - i + 1), beta2 (kappa - i + 1))`. Both are written
    /// as `beta2 kappa - (i - 1) beta_j`, so the `i = 1` pair is bit-equal.
    pub fn coupled_diag_dofs(&self) -> Vec<(f64, f64)> {
        let c = self.beta2 * self.kappa;
        (0..self.n)
            .map(|k| (c - k as f64 * self.beta1, c - k as f64 * self.beta2))
            .collect()
    }

    /// Dof pairs `(beta1 (m - i), beta2 (n - i))` for subdiagonal `i = 1..n-1`.
    pub fn coupled_subdiag_dofs(&self) -> Vec<(f64, f64)> {
        let c = self.beta2 * self.n as f64;
        (1..self.n)
            .map(|i| (c - i as f64 * self.beta1, c - i as f64 * self.beta2))
            .collect()
    }
}

/// What the two members of a coupled pair shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SharedSeedRecord {
    pub seed: u64,
    pub stream_id: u64,
    /// Diagonal normals used by both matrices.
    pub shared_normals: usize,
    /// Entries drawn through the chi quantile coupling.
    pub coupled_uniforms: usize,
}

/// A dominating (`upper`, smaller beta) and dominated (`lower`) sample built
/// on one probability space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoupledPair<T> {
    pub upper: T,
    pub lower: T,
    pub shared_seed_record: SharedSeedRecord,
}

impl CoupledPair<HermiteSample> {
    /// Raw largest eigenvalues `(upper, lower)`.
    pub fn lambda1_raw(&self) -> Result<(f64, f64)> {
        Ok((self.upper.lambda1_raw()?, self.lower.lambda1_raw()?))
    }
}

impl CoupledPair<LaguerreSample> {
    /// Raw largest gram eigenvalues `(upper, lower)`.
    pub fn lambda1_raw(&self) -> Result<(f64, f64)> {
        Ok((self.upper.lambda1_raw()?, self.lower.lambda1_raw()?))
    }
}

/// Draws `T_{m, beta1}` and `T_{n, beta2}` so that the top `n x n` corner
/// of the first dominates the second entrywise.
///
/// Draw order: shared diagonal normals, coupled off-diagonals, then the
/// remaining diagonal and off-diagonal entries of the larger matrix.
pub fn sample_coupled_hermite(spec: &HermiteCoupleSpec, stream: &mut RngStream) -> Result<CoupledPair<HermiteSample>> {
    let HermiteCoupleSpec { m, n, beta1, beta2 } = *spec;
    let mut upper_diag: Vec<f64> = (0..n)
        .map(|_| std::f64::consts::SQRT_2 * stream.standard_normal())
        .collect();
    let lower_diag = upper_diag.clone();

    let mut upper_off = Vec::with_capacity(m.saturating_sub(1));
    let mut lower_off = Vec::with_capacity(n - 1);
    for (hi, lo) in spec.coupled_offdiag_dofs() {
        let (a, b) = stream.coupled_chi(dof(hi)?, dof(lo)?)?;
        upper_off.push(a);
        lower_off.push(b);
    }

    upper_diag.extend((n..m).map(|_| std::f64::consts::SQRT_2 * stream.standard_normal()));
    let c = spec.total();
    for i in n..m {
        upper_off.push(stream.chi(dof(c - i as f64 * beta1)?));
    }

    Ok(CoupledPair {
        upper: HermiteSample {
            n: m,
            beta: beta1,
            diag: upper_diag,
            offdiag: upper_off,
        },
        lower: HermiteSample {
            n,
            beta: beta2,
            diag: lower_diag,
            offdiag: lower_off,
        },
        shared_seed_record: SharedSeedRecord {
            seed: stream.seed(),
            stream_id: stream.stream_id(),
            shared_normals: n,
            coupled_uniforms: n - 1,
        },
    })
}

/// Draws `B_{m, m kappa/n, beta1}` and `B_{n, kappa, beta2}` with the first
/// `n` diagonal and `n - 1` subdiagonal entries quantile-coupled.
///
/// Draw order: coupled diagonal, coupled subdiagonal, remaining diagonal,
/// remaining subdiagonal.
pub fn sample_coupled_laguerre(
    spec: &LaguerreCoupleSpec,
    stream: &mut RngStream,
) -> Result<CoupledPair<LaguerreSample>> {
    let LaguerreCoupleSpec {
        m,
        n,
        kappa,
        beta1,
        beta2,
    } = *spec;
    let mut upper_z = Vec::with_capacity(m);
    let mut lower_z = Vec::with_capacity(n);
    for (hi, lo) in spec.coupled_diag_dofs() {
        let (a, b) = stream.coupled_chi(dof(hi)?, dof(lo)?)?;
        upper_z.push(a);
        lower_z.push(b);
    }
    let mut upper_w = Vec::with_capacity(m.saturating_sub(1));
    let mut lower_w = Vec::with_capacity(n - 1);
    for (hi, lo) in spec.coupled_subdiag_dofs() {
        let (a, b) = stream.coupled_chi(dof(hi)?, dof(lo)?)?;
        upper_w.push(a);
        lower_w.push(b);
    }

    let cz = beta2 * kappa;
    for k in n..m {
        upper_z.push(stream.chi(dof(cz - k as f64 * beta1)?));
    }
    let cw = beta2 * n as f64;
    for i in n..m {
        upper_w.push(stream.chi(dof(cw - i as f64 * beta1)?));
    }

    Ok(CoupledPair {
        upper: LaguerreSample {
            n: m,
            kappa: spec.kappa_upper(),
            beta: beta1,
            diag: upper_z,
            subdiag: upper_w,
        },
        lower: LaguerreSample {
            n,
            kappa,
            beta: beta2,
            diag: lower_z,
            subdiag: lower_w,
        },
        shared_seed_record: SharedSeedRecord {
            seed: stream.seed(),
            stream_id: stream.stream_id(),
            shared_normals: 0,
            coupled_uniforms: 2 * n - 1,
        },
    })
}

/// `(lambda1 / sqrt(n) - 2) n^{2/3}` for a normalized Hermite eigenvalue.
pub fn scale_hermite(lambda1: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("scale_hermite needs n >= 1"));
    }
    let n = n as f64;
    Ok((lambda1 / n.sqrt() - 2.0) * n.powf(2.0 / 3.0))
}

/// `(kappa n)^{1/6} (sqrt(kappa) + sqrt(n))^{2/3} (lambda1 / (sqrt(kappa) + sqrt(n))^2 - 1)`
/// for a normalized Laguerre eigenvalue.
pub fn scale_laguerre(lambda1: f64, n: usize, kappa: f64) -> Result<f64> {
    if n == 0 || !(kappa > 0.0) {
        return Err(Error::param(format!(
            "scale_laguerre needs n >= 1 and kappa > 0, got n={n} kappa={kappa}"
        )));
    }
    let n = n as f64;
    let edge = kappa.sqrt() + n.sqrt();
    Ok((kappa * n).powf(1.0 / 6.0) * edge.powf(2.0 / 3.0) * (lambda1 / (edge * edge) - 1.0))
}

#[derive(Debug, Clone, Copy)]
pub enum CoupleSpec {
    Hermite(HermiteCoupleSpec),
    Laguerre(LaguerreCoupleSpec),
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub checks: Vec<IdentityCheck>,
    pub tolerance: f64,
    pub passed: bool,
}

pub const SCALING_REL_TOL: f64 = 1e-12;

fn identity(name: &'static str, lhs: f64, rhs: f64) -> IdentityCheck {
    let rel_err = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    IdentityCheck {
        name,
        lhs,
        rhs,
        rel_err,
    }
}

/// Checks that `beta1^{2/3} X_{upper}` and `beta2^{2/3} X_{lower}` are the
/// same affine function of the raw largest eigenvalue, so that raw pathwise
/// domination transfers to the scaled statistics.
pub fn scaling_identity_check(spec: &CoupleSpec) -> ScalingReport {
    let checks = match spec {
        CoupleSpec::Hermite(s) => {
            let (m, n) = (s.m as f64, s.n as f64);
            // beta^{2/3} H = beta^{2/3} n^{2/3} / sqrt(beta n) * raw - 2 (beta n)^{2/3}
            let slope = |beta: f64, size: f64| beta.powf(2.0 / 3.0) * size.powf(2.0 / 3.0) / (beta * size).sqrt();
            vec![
                identity(
                    "offset 2(beta m)^(2/3)",
                    2.0 * (s.beta1 * m).powf(2.0 / 3.0),
                    2.0 * (s.beta2 * n).powf(2.0 / 3.0),
                ),
                identity("slope on raw lambda1", slope(s.beta1, m), slope(s.beta2, n)),
            ]
        }
        CoupleSpec::Laguerre(s) => {
            let (m, n, k) = (s.m as f64, s.n as f64, s.kappa);
            let ku = s.kappa_upper();
            let coef_upper = s.beta1.powf(2.0 / 3.0)
                * (m * m * k / n).sqrt().powf(1.0 / 3.0)
                * (ku.sqrt() + m.sqrt()).powf(2.0 / 3.0);
            let coef_lower =
                s.beta2.powf(2.0 / 3.0) * (k * n).sqrt().powf(1.0 / 3.0) * (k.sqrt() + n.sqrt()).powf(2.0 / 3.0);
            let edge_upper = s.beta1 * (ku.sqrt() + m.sqrt()).powi(2);
            let edge_lower = s.beta2 * (k.sqrt() + n.sqrt()).powi(2);
            vec![
                identity("offset coefficient", coef_upper, coef_lower),
                identity("beta times squared edge", edge_upper, edge_lower),
                identity("slope on raw lambda1", coef_upper / edge_upper, coef_lower / edge_lower),
            ]
        }
    };
    let passed = checks.iter().all(|c| c.rel_err <= SCALING_REL_TOL);
    ScalingReport {
        checks,
        tolerance: SCALING_REL_TOL,
        passed,
    }
}
