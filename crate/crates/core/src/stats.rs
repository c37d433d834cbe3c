//! Empirical distributions and Kolmogorov-Smirnov machinery.
//!
//! `X ⪰ Y` (X stochastically dominates Y) means `F_X <= F_Y` everywhere,
//! so the one-sided statistic `D+ = sup_t (F_X(t) - F_Y(t))` measures how
//! far the samples stray from domination.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default test level for verdicts.
pub const DEFAULT_LEVEL: f64 = 0.001;
/// Smallest sample size for which a distributional verdict is issued.
pub const MIN_VERDICT_SAMPLES: usize = 1000;

/// Sorted sample carrying right-continuous ECDF evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::param("empirical distribution needs at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::param("empirical distribution cannot hold NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.count() as f64
    }

    /// Fraction of samples `<= t`.
    pub fn ecdf(&self, t: f64) -> f64 {
        self.samples.partition_point(|&x| x <= t) as f64 / self.count() as f64
    }

    /// Applies `x -> scale * x + shift` to every sample. A negative scale
    /// reverses the order and the result is re-sorted.
    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        let mut samples: Vec<f64> = self.samples.iter().map(|x| scale * x + shift).collect();
        if scale < 0.0 {
            samples.reverse();
        }
        Self { samples }
    }
}

pub fn ecdf_eval(dist: &EmpiricalDistribution, t: f64) -> f64 {
    dist.ecdf(t)
}

/// Walks the pooled sorted points and yields `F_X(t) - F_Y(t)` at each
/// distinct `t`, with both ECDFs right-continuous.
fn ecdf_differences<'a>(x: &'a [f64], y: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    std::iter::from_fn(move || {
        if i >= x.len() && j >= y.len() {
            return None;
        }
        let t = match (x.get(i), y.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        Some(i as f64 / nx - j as f64 / ny)
    })
}

fn effective_size(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    n * m / (n + m)
}

/// One-sided two-sample statistic `D+ = max(sup (F_X - F_Y), 0)` and its
/// asymptotic p-value `exp(-2 D+^2 nm/(n+m))` against `X ⪰ Y`.
pub fn one_sided_ks(x: &EmpiricalDistribution, y: &EmpiricalDistribution) -> (f64, f64) {
    let d_plus = ecdf_differences(x.samples(), y.samples()).fold(0.0_f64, f64::max);
    let p = (-2.0 * d_plus * d_plus * effective_size(x.count(), y.count())).exp();
    (d_plus, p.clamp(0.0, 1.0))
}

/// Two-sided two-sample statistic and asymptotic Kolmogorov p-value.
pub fn two_sample_ks(x: &EmpiricalDistribution, y: &EmpiricalDistribution) -> (f64, f64) {
    let d = ecdf_differences(x.samples(), y.samples()).fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let p = kolmogorov_survival(d * effective_size(x.count(), y.count()).sqrt());
    (d, p)
}

/// One-sample statistic `sup |F_n - F|` against a continuous CDF, with the
/// asymptotic Kolmogorov p-value.
pub fn one_sample_ks(x: &EmpiricalDistribution, cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = x.count() as f64;
    let d = x
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0_f64, f64::max);
    (d, kolmogorov_survival(d * n.sqrt()))
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        // theta-function form, fast for small lambda
        let c = -PI * PI / (8.0 * lambda * lambda);
        let sum: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (c * m * m).exp()
            })
            .sum();
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let sum: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum();
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}

/// Critical value of the one-sided statistic at `level`:
/// `sqrt(-ln(level) / 2) * sqrt((n + m) / (n m))`.
pub fn one_sided_critical_value(level: f64, n: usize, m: usize) -> f64 {
    (-level.ln() / 2.0).sqrt() / effective_size(n, m).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub d_plus: f64,
    pub p_value_one_sided: f64,
    pub pathwise_violations: usize,
    pub n_pairs: usize,
    pub verdict: Verdict,
}

/// Counts pairs with `hi < lo - tol`. The marginal one-sided statistic of
/// the `hi` column against the `lo` column is reported alongside.
pub fn pathwise_report(pairs: &[(f64, f64)], tol: f64) -> Result<DominanceReport> {
    if !(tol >= 0.0) {
        return Err(Error::param(format!("tolerance must be >= 0, got {tol}")));
    }
    let violations = pairs.iter().filter(|(hi, lo)| *hi < *lo - tol).count();
    let (d_plus, p) = if pairs.is_empty() {
        (0.0, 1.0)
    } else {
        let hi = EmpiricalDistribution::new(pairs.iter().map(|p| p.0).collect())?;
        let lo = EmpiricalDistribution::new(pairs.iter().map(|p| p.1).collect())?;
        one_sided_ks(&hi, &lo)
    };
    Ok(DominanceReport {
        d_plus,
        p_value_one_sided: p,
        pathwise_violations: violations,
        n_pairs: pairs.len(),
        verdict: Verdict::from_bool(violations == 0),
    })
}

fn check_verdict_inputs(x: &EmpiricalDistribution, y: &EmpiricalDistribution, level: f64) -> Result<()> {
    if x.count() < MIN_VERDICT_SAMPLES || y.count() < MIN_VERDICT_SAMPLES {
        return Err(Error::param(format!(
            "verdicts need at least {MIN_VERDICT_SAMPLES} samples per side, got {} and {}",
            x.count(),
            y.count()
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::param(format!("test level must lie in (0, 1), got {level}")));
    }
    Ok(())
}

/// Distributional check of `X ⪰ Y` from independent samples: passes when
/// `D+` stays below the one-sided critical value at `level`.
pub fn dominance_verdict(x: &EmpiricalDistribution, y: &EmpiricalDistribution, level: f64) -> Result<DominanceReport> {
    check_verdict_inputs(x, y, level)?;
    let (d_plus, p) = one_sided_ks(x, y);
    let critical = one_sided_critical_value(level, x.count(), y.count());
    Ok(DominanceReport {
        d_plus,
        p_value_one_sided: p,
        pathwise_violations: 0,
        n_pairs: 0,
        verdict: Verdict::from_bool(d_plus < critical),
    })
}

/// Two-sample equality check: passes when the KS p-value exceeds `level`.
pub fn identity_verdict(
    x: &EmpiricalDistribution,
    y: &EmpiricalDistribution,
    level: f64,
) -> Result<(f64, f64, Verdict)> {
    check_verdict_inputs(x, y, level)?;
    let (d, p) = two_sample_ks(x, y);
    Ok((d, p, Verdict::from_bool(p > level)))
}
