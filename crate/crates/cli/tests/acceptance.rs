//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use betadom::mc::{mc_collect, mc_run, McTask, Sampler};
use betadom::operator::{
    admissible_p_range, alpha_range, build_noise, coupled_tw_pair, discretize, ordering_gap, rescaled_operator,
    OperatorCouplingSpec, OperatorGrid,
};
use betadom::stats::{one_sample_ks, one_sided_ks, EmpiricalDistribution};
use betadom::RngStream;
use serde_json::Value;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

const LEVEL: f64 = 0.001;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn betadom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betadom"))
        .args(args)
        .env_remove("BETADOM_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Result<(Value, i32), String> {
    let out = betadom(args);
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("exit {code}, bad JSON ({e}): {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok((v, code))
}

/// `sqrt(-ln(level)/2) * sqrt((n+m)/(nm))`, computed here rather than taken from the library.
fn critical(n: usize, m: usize) -> f64 {
    (-LEVEL.ln() / 2.0).sqrt() * ((n + m) as f64 / (n * m) as f64).sqrt()
}

fn sample(sampler: Sampler, reps: u64, seed: u64) -> EmpiricalDistribution {
    mc_run(&McTask {
        sampler,
        reps,
        seed,
        workers: 1,
    })
    .expect("sampler runs")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_coupled_hermite_pathwise() -> Outcome {
    let start = Instant::now();
    let (v, code) = json(&[
        "couple-hermite",
        "--m",
        "3",
        "--n",
        "2",
        "--beta1",
        "2",
        "--reps",
        "10000",
        "--seed",
        "1",
    ])?;
    let secs = start.elapsed().as_secs_f64();
    let violations = v["pathwise_violations"].as_u64();
    let beta2 = v["params"]["beta2"].as_f64();
    check(
        code == 0 && violations == Some(0) && v["n_pairs"] == 10000 && beta2 == Some(3.0) && secs < 5.0,
        format!(
            "violations={violations:?} of {} beta2={beta2:?} time={secs:.2}s",
            v["n_pairs"]
        ),
    )
}

fn c2_hermite_distributional(dir: &Path) -> Outcome {
    let a = dir.join("h30.csv");
    let b = dir.join("h20.csv");
    let a_s = a.to_str().unwrap();
    let b_s = b.to_str().unwrap();
    for (n, beta, seed, out) in [("30", "2", "21", a_s), ("20", "3", "22", b_s)] {
        let o = betadom(&[
            "hermite", "--n", n, "--beta", beta, "--reps", "100000", "--seed", seed, "--out", out,
        ]);
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned());
        }
    }
    let xs = 2f64.powf(2.0 / 3.0).to_string();
    let ys = 3f64.powf(2.0 / 3.0).to_string();
    let (v, _) = json(&[
        "dominance",
        "--x",
        a_s,
        "--x-column",
        "scaled",
        "--x-scale",
        &xs,
        "--y",
        b_s,
        "--y-column",
        "scaled",
        "--y-scale",
        &ys,
    ])?;
    let d = v["statistic"].as_f64().ok_or("missing statistic")?;
    let crit = critical(100_000, 100_000);
    check(d < crit, format!("d_plus={d:.5} critical={crit:.5}"))
}

fn c3_coupled_laguerre_pathwise() -> Outcome {
    let (v, code) = json(&[
        "couple-laguerre",
        "--m",
        "4",
        "--n",
        "2",
        "--kappa",
        "3",
        "--beta1",
        "1",
        "--reps",
        "10000",
        "--seed",
        "3",
    ])?;
    let violations = v["pathwise_violations"].as_u64();
    let mismatches = v["first_diagonal_mismatches"].as_u64();
    check(
        code == 0 && violations == Some(0) && mismatches == Some(0) && v["n_pairs"] == 10000,
        format!("violations={violations:?} first-diagonal mismatches={mismatches:?}"),
    )
}

fn c4_single_entry_laws() -> Outcome {
    let beta_h = 2.5;
    let h = sample(Sampler::HermiteLambda1 { n: 1, beta: beta_h }, 100_000, 41);
    let normal = Normal::new(0.0, (2.0 / beta_h).sqrt()).unwrap();
    let (_, ph) = one_sample_ks(&h, |x| normal.cdf(x));
    let (kappa, beta_l) = (1.7, 0.8);
    let l = sample(
        Sampler::LaguerreLambda1 {
            n: 1,
            kappa,
            beta: beta_l,
        },
        100_000,
        42,
    );
    let chi2 = ChiSquared::new(beta_l * kappa).unwrap();
    let (_, pl) = one_sample_ks(&l, |x| chi2.cdf(beta_l * x));
    check(
        ph > LEVEL && pl > LEVEL,
        format!("p(hermite)={ph:.4} p(laguerre)={pl:.4}"),
    )
}

fn identity(which: &str, n: &str, seed: &str) -> Outcome {
    let (v, code) = json(&[
        "identity-check",
        "--which",
        which,
        "--n",
        n,
        "--reps",
        "20000",
        "--seed",
        seed,
    ])?;
    let p = v["p_value"].as_f64().ok_or("missing p_value")?;
    let d = v["statistic"].as_f64().ok_or("missing statistic")?;
    check(
        code == 0 && p > LEVEL && v["n"] == 20000 && v["m"] == 20000,
        format!("d={d:.5} p={p:.4}"),
    )
}

fn c8_wishart_comparisons() -> Outcome {
    let n = 4;
    let real = sample(
        Sampler::LaguerreLambda1 {
            n: 2 * n - 1,
            kappa: 2.0 * n as f64,
            beta: 1.0,
        },
        20_000,
        81,
    )
    .affine(0.5, 0.0);
    let complex = sample(
        Sampler::LaguerreLambda1 {
            n,
            kappa: n as f64,
            beta: 2.0,
        },
        20_000,
        82,
    );
    let (d1, _) = one_sided_ks(&real, &complex);
    let n = 3;
    let complex2 = sample(
        Sampler::LaguerreLambda1 {
            n: 2 * n,
            kappa: 2.0 * n as f64,
            beta: 2.0,
        },
        20_000,
        83,
    )
    .affine(0.5, 0.0);
    let quaternion = sample(
        Sampler::LaguerreLambda1 {
            n,
            kappa: n as f64 - 0.5,
            beta: 4.0,
        },
        20_000,
        84,
    );
    let (d2, _) = one_sided_ks(&complex2, &quaternion);
    let crit = critical(20_000, 20_000);
    check(
        d1 < crit && d2 < crit,
        format!("d_plus=({d1:.5}, {d2:.5}) critical={crit:.5}"),
    )
}

fn c9_operator_ordering() -> Outcome {
    let (beta1, beta2) = (2.0, 4.0);
    let mut worst_gap = f64::INFINITY;
    let mut worst_margin = f64::INFINITY;
    let mut nonzero_noise = 0usize;
    for k in [0u32, 1] {
        let grid = OperatorGrid::new(k, 20.0, 0.02).map_err(|e| e.to_string())?;
        let (lo, hi) = admissible_p_range(k, beta1, beta2).map_err(|e| e.to_string())?;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let p = lo + t * (hi - lo);
            let spec = OperatorCouplingSpec::from_p(k, beta1, beta2, p).map_err(|e| e.to_string())?;
            let noise = build_noise(&grid, &mut RngStream::new(90, k as u64));
            let upper = discretize(&grid, beta2, &noise).unwrap().scaled(spec.gamma);
            let lower = rescaled_operator(&grid, beta1, p, &noise).unwrap();
            nonzero_noise += upper
                .noise_coefficients()
                .iter()
                .zip(lower.noise_coefficients())
                .filter(|(a, b)| **a - *b != 0.0)
                .count();
            let gap = ordering_gap(&spec, &grid).unwrap().smallest_eigenvalue().unwrap();
            worst_gap = worst_gap.min(gap);
            let pairs = mc_collect(100, 91 + k as u64, 1, |s| coupled_tw_pair(&spec, &grid, s)).unwrap();
            for (l, u) in pairs {
                worst_margin = worst_margin.min(u - l);
            }
        }
    }
    check(
        nonzero_noise == 0 && worst_gap >= 0.0 && worst_margin >= -1e-9,
        format!("nonzero noise coefficients={nonzero_noise} min gap eigenvalue={worst_gap:.3e} min margin={worst_margin:.3e}"),
    )
}

fn c10_tw_distributional() -> Outcome {
    let (k, beta1, beta2) = (1, 1.0, 2.0);
    let alpha = 2f64.powf(0.5 * (1.0 / 7.0 + 6.0 / 7.0));
    let (lo, hi) = alpha_range(k, beta1, beta2).map_err(|e| e.to_string())?;
    let tw = |beta, seed| {
        sample(
            Sampler::TracyWidom {
                k,
                beta,
                length: 20.0,
                step: 0.02,
            },
            2000,
            seed,
        )
    };
    let x = tw(beta1, 101);
    let y = tw(beta2, 102).affine(alpha, 0.0);
    let (d, _) = one_sided_ks(&x, &y);
    let crit = critical(2000, 2000);
    check(
        d < crit && lo < alpha && alpha < hi,
        format!("alpha={alpha:.4} in ({lo:.4}, {hi:.4}) d_plus={d:.4} critical={crit:.4}"),
    )
}

fn c11_operator_vs_hermite() -> Outcome {
    let tw = sample(
        Sampler::TracyWidom {
            k: 0,
            beta: 2.0,
            length: 30.0,
            step: 0.01,
        },
        2000,
        111,
    );
    let edge = sample(Sampler::HermiteEdge { n: 2000, beta: 2.0 }, 2000, 112);
    let diff = (tw.mean() - edge.mean()).abs();
    check(
        diff < 0.15,
        format!(
            "operator mean={:.4} hermite mean={:.4} |diff|={diff:.4}",
            tw.mean(),
            edge.mean()
        ),
    )
}

fn c12_worker_determinism(dir: &Path) -> Outcome {
    let runs: &[&[&str]] = &[
        &["hermite", "--n", "20", "--beta", "1.5", "--reps", "300"],
        &[
            "laguerre", "--n", "5", "--kappa", "6.5", "--beta", "0.7", "--reps", "300",
        ],
        &[
            "couple-hermite",
            "--m",
            "5",
            "--n",
            "3",
            "--beta1",
            "1",
            "--reps",
            "300",
            "--format",
            "csv",
        ],
        &[
            "couple-laguerre",
            "--m",
            "4",
            "--n",
            "2",
            "--kappa",
            "3",
            "--beta1",
            "1",
            "--reps",
            "300",
            "--format",
            "csv",
        ],
        &[
            "tw", "--beta", "2", "--k", "1", "--L", "8", "--h", "0.05", "--reps", "100",
        ],
        &[
            "tw-couple",
            "--beta1",
            "1",
            "--beta2",
            "2",
            "--s",
            "0.5",
            "--L",
            "8",
            "--h",
            "0.05",
            "--reps",
            "100",
            "--format",
            "csv",
        ],
        &["lpp", "--model", "point-to-point", "--n", "6", "--reps", "300"],
        &["lpp", "--model", "point-to-line", "--n", "4", "--reps", "300"],
        &["lpp", "--model", "symmetrized", "--n", "3", "--reps", "300"],
        &[
            "identity-check",
            "--which",
            "johansson",
            "--n",
            "3",
            "--reps",
            "1000",
            "--format",
            "csv",
        ],
        &[
            "identity-check",
            "--which",
            "flat",
            "--n",
            "2",
            "--reps",
            "1000",
            "--format",
            "csv",
        ],
        &[
            "identity-check",
            "--which",
            "baik",
            "--n",
            "2",
            "--reps",
            "1000",
            "--format",
            "csv",
        ],
        &[
            "tw-range", "--k", "1", "--beta1", "1", "--beta2", "2", "--format", "csv",
        ],
    ];
    let mut checked = 0;
    for args in runs {
        let name = args[0];
        let takes_workers = name != "tw-range";
        let mut reference: Option<Vec<u8>> = None;
        for workers in ["1", "4", "8"] {
            let out = dir.join(format!("det-{checked}-{workers}.csv"));
            let mut full: Vec<&str> = args.to_vec();
            let out_s = out.to_str().unwrap();
            full.extend(["--out", out_s]);
            if takes_workers {
                full.extend(["--seed", "12", "--workers", workers]);
            }
            let o = betadom(&full);
            if o.status.code() == Some(2) || o.status.code() == Some(3) {
                return Err(format!("{name}: {}", String::from_utf8_lossy(&o.stderr)));
            }
            let bytes = std::fs::read(&out).map_err(|e| format!("{name}: {e}"))?;
            if !bytes.starts_with(b"replica,") && takes_workers {
                return Err(format!("{name}: output is not a replica CSV"));
            }
            match &reference {
                None => reference = Some(bytes),
                Some(r) if *r != bytes => return Err(format!("{name}: workers={workers} output differs")),
                Some(_) => {}
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} commands byte-identical across workers 1, 4, 8"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        (
            "1 coupled Hermite pathwise (m=3, n=2, beta1=2)",
            Box::new(c1_coupled_hermite_pathwise),
        ),
        (
            "2 scaled Hermite domination (m=30 vs n=20)",
            Box::new(|| c2_hermite_distributional(dir.path())),
        ),
        (
            "3 coupled Laguerre pathwise (m=4, n=2, kappa=3)",
            Box::new(c3_coupled_laguerre_pathwise),
        ),
        ("4 one-by-one Hermite and Laguerre laws", Box::new(c4_single_entry_laws)),
        (
            "5 point-to-point LPP vs beta=2 Laguerre (4, 4)",
            Box::new(|| identity("johansson", "4", "5")),
        ),
        (
            "6 point-to-line LPP vs beta=1 Laguerre (5, 6)",
            Box::new(|| identity("flat", "3", "6")),
        ),
        (
            "7 symmetrized LPP vs beta=4 Laguerre (3, 2.5)",
            Box::new(|| identity("baik", "3", "7")),
        ),
        ("8 Wishart comparisons at n=4 and n=3", Box::new(c8_wishart_comparisons)),
        (
            "9 operator ordering gap and shared-noise order",
            Box::new(c9_operator_ordering),
        ),
        ("10 TW_{1,1} dominates alpha TW_{2,1}", Box::new(c10_tw_distributional)),
        (
            "11 operator TW_2 mean vs Hermite n=2000",
            Box::new(c11_operator_vs_hermite),
        ),
        (
            "12 CSV determinism across worker counts",
            Box::new(|| c12_worker_determinism(dir.path())),
        ),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
