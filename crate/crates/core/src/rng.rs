//! Seeded random streams and the handful of distributions the samplers
//! are built from.
//!
//! A [`RngStream`] is a ChaCha8 keystream keyed by a 64-bit seed and
//! positioned on an independent 64-bit stream id, so replica `r` of a run
//! owns stream `r` and no two replicas ever share keystream blocks.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::special::{gamma_density, gamma_p, gamma_q, ln_gamma, normal_quantile};

/// Seeded, splittable random source.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self { seed, stream_id, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Raw 64 random bits.
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1); zero is rejected and one cannot
    /// occur with 53-bit resolution.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn normal(&mut self, mean: f64, variance: f64) -> Result<f64> {
        if !(variance >= 0.0) || !mean.is_finite() || !variance.is_finite() {
            return Err(Error::param(format!(
                "normal needs finite mean and variance >= 0, got mean={mean} variance={variance}"
            )));
        }
        if variance == 0.0 {
            return Ok(mean);
        }
        Ok(mean + variance.sqrt() * self.standard_normal())
    }

    /// Gamma(shape, scale) by Marsaglia-Tsang squeeze/rejection. Shapes
    /// below one are boosted through `Gamma(a) = Gamma(a + 1) * U^{1/a}`.
    pub fn gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        if !(shape > 0.0 && shape.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param(format!(
                "gamma needs shape > 0 and scale > 0, got shape={shape} scale={scale}"
            )));
        }
        Ok(scale * self.gamma_unit(shape))
    }

    fn gamma_unit(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            let boosted = self.gamma_unit(shape + 1.0);
            let u = self.uniform_open();
            return boosted * (u.ln() / shape).exp();
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.standard_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform_open();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// Chi draw as `sqrt(Gamma(dof / 2, 2))`.
    pub fn chi(&mut self, dof: ChiDof) -> f64 {
        (2.0 * self.gamma_unit(0.5 * dof.get())).sqrt()
    }

    pub fn exponential(&mut self, rate: f64) -> Result<f64> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("exponential needs rate > 0, got {rate}")));
        }
        Ok(self.exp1() / rate)
    }

    /// Exp(1) by inversion.
    pub fn exp1(&mut self) -> f64 {
        -self.uniform_open().ln()
    }

    /// Quantile coupling of two chi variables from one uniform draw. The
    /// first component is never below the second.
    pub fn coupled_chi(&mut self, dof_hi: ChiDof, dof_lo: ChiDof) -> Result<(f64, f64)> {
        if dof_hi.get() < dof_lo.get() {
            return Err(Error::param(format!(
                "coupled_chi needs dof_hi >= dof_lo, got {} < {}",
                dof_hi.get(),
                dof_lo.get()
            )));
        }
        let u = self.uniform_open();
        let lo = chi_quantile(u, dof_lo)?;
        if dof_hi == dof_lo {
            return Ok((lo, lo));
        }
        let hi = chi_quantile(u, dof_hi)?;
        // the exact quantiles are ordered; keep that under rounding
        Ok((hi.max(lo), lo))
    }
}

/// Degrees of freedom of a chi distribution; strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ChiDof(f64);

impl ChiDof {
    pub fn new(dof: f64) -> Result<Self> {
        if dof > 0.0 && dof.is_finite() {
            Ok(Self(dof))
        } else {
            Err(Error::param(format!("chi degrees of freedom must be > 0, got {dof}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

const QUANTILE_MAX_ITER: usize = 200;
const QUANTILE_REL_TOL: f64 = 1e-13;

/// Inverse CDF of the chi distribution.
pub fn chi_quantile(u: f64, dof: ChiDof) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::param(format!("chi_quantile needs u in (0, 1), got {u}")));
    }
    let t = gamma_quantile(0.5 * dof.get(), u)?;
    Ok((2.0 * t).sqrt())
}

/// Solves `P(a, t) = u` by Newton's method inside a maintained bracket,
/// falling back to bisection whenever a step leaves it. The upper tail is
/// matched through `Q` so that `u` close to one keeps full precision.
fn gamma_quantile(a: f64, u: f64) -> Result<f64> {
    let upper = u > 0.5;
    let tail = 1.0 - u;
    let residual = |t: f64| {
        if upper {
            tail - gamma_q(a, t)
        } else {
            gamma_p(a, t) - u
        }
    };

    let mut t = initial_guess(a, u);
    let (mut lo, mut hi);
    let r0 = residual(t);
    if r0 == 0.0 {
        return Ok(t);
    }
    if r0 > 0.0 {
        hi = t;
        lo = 0.5 * t;
        while residual(lo) > 0.0 {
            lo *= 0.5;
            if lo == 0.0 {
                return Ok(0.0);
            }
        }
    } else {
        lo = t;
        hi = 2.0 * t;
        while residual(hi) < 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::numerical(
                    "chi_quantile",
                    format!("could not bracket quantile for a={a} u={u}"),
                ));
            }
        }
    }

    t = t.clamp(lo, hi);
    for _ in 0..QUANTILE_MAX_ITER {
        let r = residual(t);
        if r == 0.0 {
            return Ok(t);
        }
        if r < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = gamma_density(a, t);
        let newton = t - r / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= QUANTILE_REL_TOL * t || (hi - lo) <= QUANTILE_REL_TOL * hi {
            return Ok(next);
        }
        t = next;
    }
    Err(Error::numerical(
        "chi_quantile",
        format!("no convergence after {QUANTILE_MAX_ITER} iterations for a={a} u={u}, bracket [{lo}, {hi}]"),
    ))
}

fn initial_guess(a: f64, u: f64) -> f64 {
    let small = ((u.ln() + ln_gamma(a + 1.0)) / a).exp();
    if a < 1.0 {
        return small.max(f64::MIN_POSITIVE);
    }
    // Wilson-Hilferty
    let z = normal_quantile(u);
    let w = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * a.sqrt());
    let wh = a * w * w * w;
    if wh > 0.0 {
        wh
    } else {
        small.max(f64::MIN_POSITIVE)
    }
}
