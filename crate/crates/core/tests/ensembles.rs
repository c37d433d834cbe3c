mod common;

use betadom::ensembles::{
    sample_coupled_hermite, sample_coupled_laguerre, sample_hermite, sample_laguerre, scale_hermite,
    scaling_identity_check, CoupleSpec, HermiteCoupleSpec, LaguerreCoupleSpec,
};
use betadom::special::gamma_p;
use betadom::stats::{dominance_verdict, identity_verdict, one_sample_ks, EmpiricalDistribution};
use betadom::RngStream;
use common::{dense_eigenvalues, draws, LEVEL};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn hermite_edge_mean_brackets_tracy_widom() {
    let d = draws(2000, 11, |s| {
        let l = sample_hermite(200, 2.0, s).unwrap().lambda1().unwrap();
        scale_hermite(l, 200).unwrap()
    });
    let m = d.mean();
    assert!((-2.4..=-1.2).contains(&m), "mean {m}");
}

#[test]
fn trace_identity_for_two_by_two() {
    let mut s = RngStream::new(12, 0);
    for beta in [0.3, 1.0, 2.0, 7.5] {
        let h = sample_hermite(2, beta, &mut s).unwrap();
        let ev = dense_eigenvalues(&h.matrix());
        let trace = h.diag()[0] + h.diag()[1];
        assert!((ev[0] + ev[1] - trace).abs() < 1e-12 * trace.abs().max(1.0));
        assert!((h.lambda1_raw().unwrap() - ev[1]).abs() < 1e-12 * ev[1].abs().max(1.0));
    }
}

#[test]
fn single_laguerre_eigenvalue_is_scaled_chi_squared() {
    let (kappa, beta) = (2.7, 1.3);
    let d = draws(100_000, 13, |s| {
        sample_laguerre(1, kappa, beta, s).unwrap().lambda1().unwrap()
    });
    let chi2 = ChiSquared::new(beta * kappa).unwrap();
    let (_, p) = one_sample_ks(&d, |x| chi2.cdf(beta * x));
    assert!(p > LEVEL, "p={p}");
    // the in-crate incomplete gamma agrees with the reference cdf
    for x in [0.1, 1.0, 3.0, 9.0] {
        assert!((gamma_p(beta * kappa / 2.0, beta * x / 2.0) - chi2.cdf(beta * x)).abs() < 1e-12);
    }
}

#[test]
fn coupled_hermite_pathwise_and_witness() {
    let spec = HermiteCoupleSpec::new(3, 2, 2.0).unwrap();
    assert_eq!(spec.coupled_offdiag_dofs(), vec![(4.0, 3.0)]);
    let mut violations = 0;
    for r in 0..100_000 {
        let mut s = RngStream::new(14, r);
        let pair = sample_coupled_hermite(&spec, &mut s).unwrap();
        assert!(pair.upper.offdiag()[0] >= pair.lower.offdiag()[0]);
        let (hi, lo) = pair.lambda1_raw().unwrap();
        if hi < lo - 1e-10 {
            violations += 1;
        }
        if r % 100 == 0 {
            let upper = pair.upper.matrix();
            let lower = pair.lower.matrix();
            let corner = upper.principal_corner(2).unwrap();
            let corner_top = corner.largest_eigenvalue().unwrap();
            assert!(corner_top <= hi + 1e-10);
            let v = lower.top_eigenvector(lo, 1e-13).unwrap();
            assert!(corner.quadratic_form(&v) >= lower.quadratic_form(&v) - 1e-12);
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn coupled_components_have_direct_marginals() {
    let spec = HermiteCoupleSpec::new(3, 2, 2.0).unwrap();
    let n = 100_000;
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    for r in 0..n as u64 {
        let (a, b) = sample_coupled_hermite(&spec, &mut RngStream::new(15, r))
            .unwrap()
            .lambda1_raw()
            .unwrap();
        upper.push(a);
        lower.push(b);
    }
    let upper = EmpiricalDistribution::new(upper).unwrap();
    let lower = EmpiricalDistribution::new(lower).unwrap();
    let direct_upper = draws(n, 16, |s| sample_hermite(3, 2.0, s).unwrap().lambda1_raw().unwrap());
    let direct_lower = draws(n, 17, |s| sample_hermite(2, 3.0, s).unwrap().lambda1_raw().unwrap());
    assert!(identity_verdict(&upper, &direct_upper, LEVEL).unwrap().2.passed());
    assert!(identity_verdict(&lower, &direct_lower, LEVEL).unwrap().2.passed());
}

#[test]
fn coupled_laguerre_pathwise_and_marginals() {
    let spec = LaguerreCoupleSpec::new(4, 2, 3.0, 1.0).unwrap();
    assert_eq!(spec.coupled_diag_dofs(), vec![(6.0, 6.0), (5.0, 4.0)]);
    assert_eq!(spec.coupled_subdiag_dofs(), vec![(3.0, 2.0)]);
    let n = 100_000;
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    for r in 0..n as u64 {
        let pair = sample_coupled_laguerre(&spec, &mut RngStream::new(18, r)).unwrap();
        assert_eq!(pair.upper.diag()[0], pair.lower.diag()[0]);
        let (a, b) = pair.lambda1_raw().unwrap();
        assert!(a >= b - 1e-10, "replica {r}: {a} < {b}");
        upper.push(a);
        lower.push(b);
    }
    let upper = EmpiricalDistribution::new(upper).unwrap();
    let lower = EmpiricalDistribution::new(lower).unwrap();
    let direct_upper = draws(n, 19, |s| {
        sample_laguerre(4, 6.0, 1.0, s).unwrap().lambda1_raw().unwrap()
    });
    let direct_lower = draws(n, 20, |s| {
        sample_laguerre(2, 3.0, 2.0, s).unwrap().lambda1_raw().unwrap()
    });
    assert!(identity_verdict(&upper, &direct_upper, LEVEL).unwrap().2.passed());
    assert!(identity_verdict(&lower, &direct_lower, LEVEL).unwrap().2.passed());
}

#[test]
fn scaled_edges_are_dominated_in_distribution() {
    // beta^{2/3} H is an increasing affine map of the raw eigenvalue, so the
    // independent runs below compare beta1^{2/3} H_{m} against beta2^{2/3} H_{n}
    let (m, n, beta1) = (6, 4, 2.0);
    let beta2 = 3.0;
    let edge = |size: usize, beta: f64, s: &mut RngStream| {
        let l = sample_hermite(size, beta, s).unwrap().lambda1().unwrap();
        beta.powf(2.0 / 3.0) * scale_hermite(l, size).unwrap()
    };
    let x = draws(20_000, 21, |s| edge(m, beta1, s));
    let y = draws(20_000, 22, |s| edge(n, beta2, s));
    let report = dominance_verdict(&x, &y, LEVEL).unwrap();
    assert!(report.verdict.passed(), "{report:?}");
}

#[test]
fn scaling_identities_hold_for_examples() {
    for spec in [
        CoupleSpec::Hermite(HermiteCoupleSpec::new(3, 2, 2.0).unwrap()),
        CoupleSpec::Hermite(HermiteCoupleSpec::new(30, 20, 2.0).unwrap()),
        CoupleSpec::Hermite(HermiteCoupleSpec::new(5, 5, 1.7).unwrap()),
        CoupleSpec::Laguerre(LaguerreCoupleSpec::new(4, 2, 3.0, 1.0).unwrap()),
        CoupleSpec::Laguerre(LaguerreCoupleSpec::new(7, 3, 5.5, 0.4).unwrap()),
    ] {
        let report = scaling_identity_check(&spec);
        assert!(report.passed, "{report:?}");
    }
    let l = LaguerreCoupleSpec::new(4, 2, 3.0, 1.0).unwrap();
    let lhs = l.beta1 * ((4.0 * 3.0 / 2.0_f64).sqrt() + 2.0).powi(2);
    let rhs = l.beta2 * (3.0_f64.sqrt() + 2.0_f64.sqrt()).powi(2);
    assert!((lhs - rhs).abs() <= 1e-12 * rhs);
}

#[test]
fn parameter_errors() {
    let mut s = RngStream::new(0, 0);
    assert!(sample_laguerre(3, 2.0, 1.0, &mut s).unwrap_err().is_parameter());
    assert!(sample_hermite(0, 1.0, &mut s).is_err());
    assert!(sample_hermite(3, -1.0, &mut s).is_err());
    assert!(HermiteCoupleSpec::new(2, 3, 1.0).is_err());
    assert!(LaguerreCoupleSpec::new(4, 2, 0.5, 1.0).is_err());
}
