use std::path::Path;

use anyhow::{Context, Result};
use hchit::combinatorics::{xi_exact, XiTable};
use hchit::exact_hitting::{
    full_survival, inclusion_exclusion_sum, laplace_approximation, laplace_formula, lumped_laplace,
    lumped_survival, LaplaceQuery, SurvivalTable,
};
use hchit::random_sets::{
    check_conditions, percolation_cloud, sample_without_replacement, StatsMode, TargetSet, Thresholds, TimeScale,
};
use hchit::rem_aging::{asl, two_point_thetas, RemConfig, TwoPointOptions};
use hchit::walk_mc::{dkw_band, ks_to_exponential, simulate_hitting, survival_curve};
use hchit::Vertex;
use serde::Serialize;

use crate::args::*;
use crate::output::{Output, Table};
use crate::{Status, UsageError};

pub fn load_set(path: &Path, n: Option<u32>) -> Result<TargetSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading set file {}", path.display()))?;
    TargetSet::parse_set_file(&text, n).with_context(|| format!("parsing set file {}", path.display()))
}

pub fn time_scale(m: &str) -> Result<TimeScale> {
    if m == "auto" {
        return Ok(TimeScale::Auto);
    }
    let value: f64 = m
        .parse()
        .map_err(|_| UsageError(format!("--m expects a number or `auto`, got `{m}`")))?;
    Ok(TimeScale::Fixed(value))
}

fn vertex(n: u32, hex: &str) -> Result<Vertex> {
    Vertex::parse_hex(n, hex).with_context(|| format!("start vertex `{hex}`"))
}

pub fn survival_table(table: &SurvivalTable) -> Table {
    let mut out = Table::new(&["t", "survival"]);
    for (t, &s) in table.survival.iter().enumerate() {
        out.push(vec![(t as u64).into(), s.into()]);
    }
    out
}

pub fn xi(args: &XiArgs, out: &mut Output) -> Result<Status> {
    let table = XiTable::new(args.n)?;
    let ks: Vec<u32> = match args.k {
        Some(k) => {
            if k > args.n {
                return Err(UsageError(format!("--k {k} exceeds --n {}", args.n)).into());
            }
            vec![k]
        }
        None => (0..=args.n).collect(),
    };
    let mut columns = vec!["k", "xi", "xi_times_binom"];
    if args.exact {
        columns.push("xi_exact");
    }
    let mut t = Table::new(&columns);
    for k in ks {
        let mut row = vec![k.into(), table.value(k).into(), table.times_binom(k).into()];
        if args.exact {
            row.push(xi_exact(args.n, k)?.to_string().into());
        }
        t.push(row);
    }
    out.table("xi", &t)?;
    Ok(Status::Ok)
}

pub fn laplace(args: &LaplaceArgs, out: &mut Output) -> Result<Status> {
    let ks: Vec<u32> = match args.k {
        Some(k) => vec![k],
        None => (0..=args.n).collect(),
    };
    let xi = XiTable::new(args.n)?;
    let mut t = Table::new(&["k", "epsilon", "lambda", "laplace_formula", "lumped_laplace", "approximation"]);
    for k in ks {
        let q = LaplaceQuery::new(args.n, k, args.s, args.m)?;
        t.push(vec![
            k.into(),
            q.epsilon.into(),
            q.lambda.into(),
            laplace_formula(&q).into(),
            lumped_laplace(args.n, k, args.s, args.m)?.into(),
            laplace_approximation(args.n, args.s, args.m, xi.value(k)).into(),
        ]);
    }
    out.table("laplace", &t)?;
    Ok(Status::Ok)
}

pub fn survival(args: &SurvivalArgs, out: &mut Output) -> Result<Status> {
    let table = if args.lumped {
        let n = args.n.ok_or_else(|| UsageError("--lumped needs --n".into()))?;
        lumped_survival(n, args.k.expect("clap requires --k"), args.horizon)?
    } else {
        let (Some(path), Some(x)) = (&args.set, &args.x) else {
            return Err(UsageError("survival needs --lumped --k K or --set FILE --x HEX".into()).into());
        };
        let set = load_set(path, args.n)?;
        full_survival(&set, vertex(set.dim(), x)?, args.horizon)?
    };
    out.table("survival", &survival_table(&table))?;
    Ok(Status::Ok)
}

pub fn incl_excl(args: &InclExclArgs, out: &mut Output) -> Result<Status> {
    let set = load_set(&args.set, args.n)?;
    let x = vertex(set.dim(), &args.x)?;
    let m = time_scale(&args.m)?.resolve(&set)?;
    let sum = inclusion_exclusion_sum(&set, x, args.i, args.a, m)?;
    let mut t = Table::new(&["i", "a", "m", "sum", "target"]);
    t.push(vec![args.i.into(), args.a.into(), m.into(), sum.into(), args.a.powi(args.i as i32).into()]);
    out.table("incl_excl", &t)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct HitSummary {
    n: u32,
    set_size: usize,
    start: String,
    m: f64,
    trials: usize,
    seed: u64,
    cap: u64,
    ks: f64,
    censored_fraction: f64,
    flagged: bool,
    dkw_band_99: f64,
}

pub fn hit_mc(args: &HitMcArgs, seed: u64, out: &mut Output) -> Result<Status> {
    let set = load_set(&args.set, args.n)?;
    let x = vertex(set.dim(), &args.x)?;
    let m = time_scale(&args.m)?.resolve(&set)?;
    if !(args.a_step > 0.0 && args.a_max >= 0.0) {
        return Err(UsageError("--a-step must be positive and --a-max non-negative".into()).into());
    }
    let e = simulate_hitting(&set, x, m, args.trials, seed, args.cap)?;
    let ks = ks_to_exponential(&e)?;
    let mut t = Table::new(&["a", "empirical_survival", "exp_a", "ks_running"]);
    for p in survival_curve(&e, args.a_step, args.a_max) {
        t.push(vec![p.a.into(), p.empirical_survival.into(), p.exp_a.into(), p.ks_running.into()]);
    }
    out.table("hit_mc", &t)?;
    let summary = HitSummary {
        n: set.dim(),
        set_size: set.len(),
        start: x.to_hex(),
        m,
        trials: args.trials,
        seed,
        cap: e.cap,
        ks: ks.statistic,
        censored_fraction: ks.censored_fraction,
        flagged: ks.flagged,
        dkw_band_99: dkw_band(args.trials, 0.01),
    };
    out.json("summary", &summary, false)?;
    Ok(Status::Ok)
}

pub fn make_set(args: &MakeSetArgs, seed: u64, out: &mut Output) -> Result<Status> {
    let set = match args.kind {
        SetKind::Percolation => percolation_cloud(args.n, args.rho.expect("clap requires --rho"), seed)?,
        SetKind::Sample => sample_without_replacement(args.n, args.size.expect("clap requires --M"), seed)?,
    };
    let body = set.to_set_file();
    match &args.output {
        Some(path) => out.write_file(path, &body)?,
        None => print!("{body}"),
    }
    Ok(Status::Ok)
}

pub fn check(args: &CheckArgs, seed: u64, out: &mut Output) -> Result<Status> {
    let set = load_set(&args.set, args.n)?;
    let thresholds = Thresholds {
        size: args.size_tol,
        xi_gap: args.xi_tol,
        vsum: args.vsum_tol,
        vbig: args.vbig_tol,
    };
    let mode = if args.exact_stats {
        StatsMode::Exact
    } else {
        StatsMode::Sampled {
            samples: args.samples,
            seed,
        }
    };
    let report = check_conditions(&set, time_scale(&args.m)?, thresholds, mode)?;
    out.json("report", &report, true)?;
    Ok(if report.passes() { Status::Ok } else { Status::Violation })
}

pub fn rem(args: &RemArgs, seed: u64, out: &mut Output) -> Result<Status> {
    let cfg = RemConfig::from_beta_ratio(args.n, args.alpha, args.beta_ratio, args.theta[0])?;
    if !cfg.regime_valid() {
        eprintln!("warning: alpha beta = {} is outside (0, beta_c)", cfg.alpha * cfg.beta);
    }
    let opts = TwoPointOptions {
        disorder: args.disorder,
        walks: args.walks,
        seed,
        quenched: args.quenched,
        step_budget: args.budget,
    };
    let estimates = two_point_thetas(&cfg, &args.theta, &opts)?;
    let mut t = Table::new(&["theta", "Rn_estimate", "stderr", "asl_target"]);
    for e in &estimates {
        if e.flagged {
            eprintln!(
                "warning: theta={}: {:.1}% of walks exhausted the step budget",
                e.theta,
                100.0 * e.exhausted_fraction
            );
        }
        t.push(vec![e.theta.into(), e.estimate.into(), e.stderr.into(), e.target.into()]);
    }
    out.table("rem", &t)?;
    Ok(Status::Ok)
}

pub fn asl_cmd(args: &AslArgs, out: &mut Output) -> Result<Status> {
    if args.z.is_empty() {
        return Err(UsageError("--z needs at least one value".into()).into());
    }
    let mut t = Table::new(&["alpha", "z", "asl"]);
    for &z in &args.z {
        t.push(vec![args.alpha.into(), z.into(), asl(args.alpha, z)?.into()]);
    }
    out.table("asl", &t)?;
    Ok(Status::Ok)
}
