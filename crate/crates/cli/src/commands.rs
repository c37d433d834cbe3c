use std::path::Path;

use betadom::ensembles::{
    sample_coupled_hermite, sample_coupled_laguerre, sample_hermite, sample_laguerre, scale_hermite, scale_laguerre,
    scaling_identity_check, CoupleSpec, HermiteCoupleSpec, LaguerreCoupleSpec,
};
use betadom::lpp::{lpp_point_to_line, lpp_point_to_point, lpp_symmetrized, LppConfig};
use betadom::mc::mc_collect;
use betadom::operator::{
    admissible_p_range, alpha_range, coupled_tw_pair, ordering_gap, s_range, sample_tw, OperatorCouplingSpec,
    OperatorGrid,
};
use betadom::stats::{
    dominance_verdict, identity_verdict, one_sided_critical_value, pathwise_report, DominanceReport, Verdict,
};
use betadom::{EmpiricalDistribution, RngStream};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::error::CliError;
use crate::output::{emit_json, emit_report, emit_table, float, Report, Table};

pub fn run(command: &Command) -> Result<Verdict, CliError> {
    match command {
        Command::Hermite(a) => hermite(a, command),
        Command::Laguerre(a) => laguerre(a, command),
        Command::CoupleHermite(a) => couple_hermite(a, command),
        Command::CoupleLaguerre(a) => couple_laguerre(a, command),
        Command::Tw(a) => tw(a, command),
        Command::TwCouple(a) => tw_couple(a, command),
        Command::TwRange(a) => tw_range(a),
        Command::Lpp(a) => lpp(a, command),
        Command::IdentityCheck(a) => identity_check(a, command),
        Command::Dominance(a) => dominance(a, command),
    }
}

fn collect<T: Send>(mc: &McOpts, f: impl Fn(&mut RngStream) -> betadom::Result<T> + Sync) -> Result<Vec<T>, CliError> {
    Ok(mc_collect(mc.reps, mc.seed, mc.workers, f)?)
}

fn hermite(a: &HermiteArgs, config: &Command) -> Result<Verdict, CliError> {
    let rows = collect(&a.mc, |s| {
        let l = sample_hermite(a.n, a.beta, s)?.lambda1()?;
        Ok(vec![l, scale_hermite(l, a.n)?])
    })?;
    emit_table(&Table::new(&["lambda1", "scaled"], rows), config, &a.output)?;
    Ok(Verdict::Pass)
}

fn laguerre(a: &LaguerreArgs, config: &Command) -> Result<Verdict, CliError> {
    let rows = collect(&a.mc, |s| {
        let l = sample_laguerre(a.n, a.kappa, a.beta, s)?.lambda1()?;
        Ok(vec![l, scale_laguerre(l, a.n, a.kappa)?])
    })?;
    emit_table(&Table::new(&["lambda1", "scaled"], rows), config, &a.output)?;
    Ok(Verdict::Pass)
}

fn pathwise_fields(r: &DominanceReport, margin: f64) -> Map<String, Value> {
    let mut extra = Map::new();
    extra.insert("pathwise_violations".into(), r.pathwise_violations.into());
    extra.insert("n_pairs".into(), r.n_pairs.into());
    extra.insert("min_margin".into(), margin.into());
    extra
}

fn min_margin(pairs: &[(f64, f64)]) -> f64 {
    pairs.iter().map(|(hi, lo)| hi - lo).fold(f64::INFINITY, f64::min)
}

fn pair_table(pairs: &[(f64, f64)]) -> Table {
    Table::new(
        &["upper", "lower"],
        pairs.iter().map(|&(hi, lo)| vec![hi, lo]).collect(),
    )
}

fn couple_hermite(a: &CoupleHermiteArgs, config: &Command) -> Result<Verdict, CliError> {
    let spec = HermiteCoupleSpec::new(a.m, a.n, a.beta1)?;
    let identities = scaling_identity_check(&CoupleSpec::Hermite(spec));
    let pairs = collect(&a.mc, |s| sample_coupled_hermite(&spec, s)?.lambda1_raw())?;
    let r = pathwise_report(&pairs, a.tol)?;
    let verdict = Verdict::from_bool(r.verdict.passed() && identities.passed);
    let report = Report {
        test: "pathwise",
        params: json!({ "m": a.m, "n": a.n, "beta1": spec.beta1, "beta2": spec.beta2, "tol": a.tol, "scaling_identities": identities }),
        n: r.n_pairs,
        m: None,
        statistic: Some(r.pathwise_violations as f64),
        p_value: None,
        verdict,
        seed: Some(a.mc.seed),
        extra: pathwise_fields(&r, min_margin(&pairs)),
        config,
    };
    emit_report(&report, Some(&pair_table(&pairs)), &a.output)?;
    Ok(verdict)
}

fn couple_laguerre(a: &CoupleLaguerreArgs, config: &Command) -> Result<Verdict, CliError> {
    let spec = LaguerreCoupleSpec::new(a.m, a.n, a.kappa, a.beta1)?;
    let identities = scaling_identity_check(&CoupleSpec::Laguerre(spec));
    let draws = collect(&a.mc, |s| {
        let pair = sample_coupled_laguerre(&spec, s)?;
        let tied = pair.upper.diag()[0] == pair.lower.diag()[0];
        Ok((pair.lambda1_raw()?, tied))
    })?;
    let pairs: Vec<(f64, f64)> = draws.iter().map(|d| d.0).collect();
    let mismatches = draws.iter().filter(|d| !d.1).count();
    let r = pathwise_report(&pairs, a.tol)?;
    let verdict = Verdict::from_bool(r.verdict.passed() && identities.passed && mismatches == 0);
    let mut extra = pathwise_fields(&r, min_margin(&pairs));
    extra.insert("first_diagonal_mismatches".into(), mismatches.into());
    let report = Report {
        test: "pathwise",
        params: json!({
            "m": a.m, "n": a.n, "kappa": a.kappa, "kappa_upper": spec.kappa_upper(),
            "beta1": spec.beta1, "beta2": spec.beta2, "tol": a.tol, "scaling_identities": identities,
        }),
        n: r.n_pairs,
        m: None,
        statistic: Some(r.pathwise_violations as f64),
        p_value: None,
        verdict,
        seed: Some(a.mc.seed),
        extra,
        config,
    };
    emit_report(&report, Some(&pair_table(&pairs)), &a.output)?;
    Ok(verdict)
}

fn grid(g: &GridOpts) -> Result<OperatorGrid, CliError> {
    Ok(OperatorGrid::new(g.k, g.length, g.step)?)
}

fn tw(a: &TwArgs, config: &Command) -> Result<Verdict, CliError> {
    let grid = grid(&a.grid)?;
    let rows = collect(&a.mc, |s| Ok(vec![sample_tw(&grid, a.beta, s)?]))?;
    emit_table(&Table::new(&["tw"], rows), config, &a.output)?;
    Ok(Verdict::Pass)
}

fn tw_couple(a: &TwCoupleArgs, config: &Command) -> Result<Verdict, CliError> {
    let k = a.grid.k;
    let spec = match (a.p, a.s) {
        (Some(p), None) => OperatorCouplingSpec::from_p(k, a.beta1, a.beta2, p)?,
        (None, Some(s)) => OperatorCouplingSpec::from_s(k, a.beta1, a.beta2, s)?,
        _ => return Err(CliError::Usage("give exactly one of --p and --s".into())),
    };
    let grid = grid(&a.grid)?;
    let gap_min = ordering_gap(&spec, &grid)?.smallest_eigenvalue()?;
    let pairs: Vec<(f64, f64)> = collect(&a.mc, |s| coupled_tw_pair(&spec, &grid, s))?
        .into_iter()
        .map(|(lower, upper)| (upper, lower))
        .collect();
    let r = pathwise_report(&pairs, a.tol)?;
    let mut extra = pathwise_fields(&r, min_margin(&pairs));
    extra.insert("gap_min_eigenvalue".into(), gap_min.into());
    let report = Report {
        test: "pathwise",
        params: json!({
            "k": k, "beta1": a.beta1, "beta2": a.beta2, "p": spec.p, "gamma": spec.gamma,
            "alpha": spec.alpha, "s": spec.s, "p_range": admissible_p_range(k, a.beta1, a.beta2)?,
            "laplacian_coefficient": spec.laplacian_coefficient(),
            "potential_coefficient": spec.potential_coefficient(), "tol": a.tol,
        }),
        n: r.n_pairs,
        m: None,
        statistic: Some(r.pathwise_violations as f64),
        p_value: None,
        verdict: r.verdict,
        seed: Some(a.mc.seed),
        extra,
        config,
    };
    emit_report(&report, Some(&pair_table(&pairs)), &a.output)?;
    Ok(r.verdict)
}

fn tw_range(a: &TwRangeArgs) -> Result<Verdict, CliError> {
    let p = admissible_p_range(a.k, a.beta1, a.beta2)?;
    let alpha = alpha_range(a.k, a.beta1, a.beta2)?;
    let s = s_range(a.k);
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(
            &json!({ "k": a.k, "beta1": a.beta1, "beta2": a.beta2, "p_range": p, "alpha_range": alpha, "s_range": s }),
            &a.output,
        )?,
        Format::Csv => {
            let mut out = String::from("quantity,lo,hi\n");
            for (name, (lo, hi)) in [("p", p), ("alpha", alpha), ("s", s)] {
                out.push_str(&format!("{name},{},{}\n", float(lo), float(hi)));
            }
            crate::output::emit(&a.output, out.as_bytes())?;
        }
    }
    Ok(Verdict::Pass)
}

fn lpp(a: &LppArgs, config: &Command) -> Result<Verdict, CliError> {
    let cfg = LppConfig::new(a.model.into(), a.n)?;
    let rows = collect(&a.mc, |s| Ok(vec![cfg.sample(s)]))?;
    emit_table(&Table::new(&["passage_time"], rows), config, &a.output)?;
    Ok(Verdict::Pass)
}

fn identity_check(a: &IdentityArgs, config: &Command) -> Result<Verdict, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("identity-check needs --n >= 1".into()));
    }
    let n = a.n;
    // (Laguerre size, kappa, beta, factor applied to the normalized eigenvalue)
    let (size, kappa, beta, factor) = match a.which {
        Which::Johansson => (n, n as f64, 2.0, 1.0),
        Which::Flat => (2 * n - 1, 2.0 * n as f64, 1.0, 0.5),
        Which::Baik => (n, n as f64 - 0.5, 4.0, 2.0),
    };
    // each replica draws the passage time first, then the eigenvalue, from one stream
    let rows = collect(&a.mc, |s| {
        let g = match a.which {
            Which::Johansson => lpp_point_to_point(n, s),
            Which::Flat => lpp_point_to_line(n, s),
            Which::Baik => lpp_symmetrized(n, s),
        };
        let l = factor * sample_laguerre(size, kappa, beta, s)?.lambda1()?;
        Ok(vec![g, l])
    })?;
    let x = EmpiricalDistribution::new(rows.iter().map(|r| r[0]).collect())?;
    let y = EmpiricalDistribution::new(rows.iter().map(|r| r[1]).collect())?;
    let (d, p, verdict) = identity_verdict(&x, &y, a.alpha_level)?;
    let report = Report {
        test: "two_sample_ks",
        params: json!({
            "which": a.which, "n": n, "laguerre_n": size, "kappa": kappa, "beta": beta,
            "factor": factor, "alpha_level": a.alpha_level,
        }),
        n: x.count(),
        m: Some(y.count()),
        statistic: Some(d),
        p_value: Some(p),
        verdict,
        seed: Some(a.mc.seed),
        extra: Map::new(),
        config,
    };
    emit_report(
        &report,
        Some(&Table::new(&["passage_time", "eigenvalue"], rows)),
        &a.output,
    )?;
    Ok(verdict)
}

fn read_column(path: &Path, column: Option<&str>) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let idx = match column {
        Some(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("no column `{name}`")))?,
        None => match headers.iter().position(|h| h != "replica") {
            Some(i) => i,
            None => return Err(bad("no data column".into())),
        },
    };
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let field = record
            .get(idx)
            .ok_or_else(|| bad(format!("row {} is short", line + 1)))?;
        let v = field
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("row {}: `{field}` is not a number", line + 1)))?;
        values.push(v);
    }
    Ok(values)
}

fn dominance(a: &DominanceArgs, config: &Command) -> Result<Verdict, CliError> {
    let x = EmpiricalDistribution::new(read_column(&a.x, a.x_column.as_deref())?)?.affine(a.x_scale, a.x_shift);
    let y = EmpiricalDistribution::new(read_column(&a.y, a.y_column.as_deref())?)?.affine(a.y_scale, a.y_shift);
    let r = dominance_verdict(&x, &y, a.alpha_level)?;
    let mut extra = Map::new();
    extra.insert(
        "critical_value".into(),
        one_sided_critical_value(a.alpha_level, x.count(), y.count()).into(),
    );
    let report = Report {
        test: "one_sided_ks",
        params: json!({
            "x_scale": a.x_scale, "x_shift": a.x_shift, "y_scale": a.y_scale, "y_shift": a.y_shift,
            "alpha_level": a.alpha_level,
        }),
        n: x.count(),
        m: Some(y.count()),
        statistic: Some(r.d_plus),
        p_value: Some(r.p_value_one_sided),
        verdict: r.verdict,
        seed: None,
        extra,
        config,
    };
    emit_report(&report, None, &a.output)?;
    Ok(r.verdict)
}
