//! Subcommand pipelines; each returns the text written to standard output.

use serde::Serialize;
use serde_json::json;
use zetalab::explicit::{direct_window, linstat_sample, DIRECT_TAIL_TOL};
use zetalab::primes::{build_table, diagonal_sum, required_limit};
use zetalab::rmt::{cue_moments_from, CueConfig, CueSamples};
use zetalab::stats::{moments_with, AverageConfig, MomentOptions, MomentReport};
use zetalab::zeros::{find_zeros, import_zeros, verify_count, DEFAULT_TOL};
use zetalab::{Error, PrimePowerTable, TestFunction, ZeroSet};

use crate::args::*;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Pole(_) | Error::Overflow(_) | Error::IncompleteDetection { .. } | Error::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VALIDATION, message: message.into() }
    }
}

type Out = Result<String, Failure>;

#[derive(Serialize)]
struct Document<'a, C: Serialize, R: Serialize> {
    command: &'a str,
    config: Config<'a, C>,
    result: R,
}

#[derive(Serialize)]
struct Config<'a, C: Serialize> {
    #[serde(flatten)]
    args: &'a C,
    #[serde(flatten)]
    global: &'a Global,
}

fn document<C: Serialize, R: Serialize>(command: &str, args: &C, global: &Global, result: R) -> Out {
    let doc = Document { command, config: Config { args, global }, result };
    serde_json::to_string_pretty(&doc).map(|s| s + "\n").map_err(|e| Failure { code: EXIT_NUMERICAL, message: e.to_string() })
}

pub fn execute(cli: &Cli) -> Out {
    let g = &cli.global;
    match &cli.command {
        Command::Zeros(ZerosCommand::Find(a)) => zeros_find(a, g),
        Command::Zeros(ZerosCommand::Import(a)) => zeros_import(a, g),
        Command::Zeros(ZerosCommand::Verify(a)) => zeros_verify(a, g),
        Command::Linstat(LinstatCommand::Eval(a)) => linstat("linstat eval", a, g, a.direct),
        Command::Linstat(LinstatCommand::Identity(a)) => linstat("linstat identity", a, g, true),
        Command::Moments(MomentsCommand::Run(a)) => moments_run(a, g),
        Command::Diag(DiagCommand::Check(a)) => diag_check(a, g),
        Command::Rmt(RmtCommand::Run(a)) => rmt_run(a, g),
    }
}

fn zeros_find(a: &FindArgs, g: &Global) -> Out {
    let zs = find_zeros(a.tmin, a.tmax, a.tol)?;
    let count = verify_count(&zs);
    document("zeros find", a, g, json!({ "zeros": zs, "count": count }))
}

fn zeros_import(a: &ImportArgs, g: &Global) -> Out {
    let imported = import_zeros(&a.path, g.zero_offset)?;
    let count = verify_count(&imported.zeros);
    document("zeros import", a, g, json!({ "zeros": imported.zeros, "warnings": imported.warnings, "count": count }))
}

fn zeros_verify(a: &VerifyArgs, g: &Global) -> Out {
    let zs = match (&a.path, a.tmin, a.tmax) {
        (Some(p), _, _) => import_zeros(p, g.zero_offset)?.zeros,
        (None, Some(lo), Some(hi)) => find_zeros(lo, hi, DEFAULT_TOL)?,
        _ => return Err(Failure::validation("zeros verify needs --path or --tmin/--tmax")),
    };
    document("zeros verify", a, g, verify_count(&zs))
}

fn prime_table(f: &TestFunction, t: &[f64], g: &Global) -> Result<PrimePowerTable, Failure> {
    let needed = t.iter().map(|&t| required_limit(f.alpha(), t)).max().unwrap_or(2);
    Ok(build_table(g.prime_limit.unwrap_or(needed).max(2))?)
}

fn linstat(command: &str, a: &LinstatArgs, g: &Global, direct: bool) -> Out {
    let f = a.function.build()?;
    let table = prime_table(&f, &[a.t], g)?;
    let zs: Option<ZeroSet> = match &a.zeros {
        Some(p) => Some(import_zeros(p, g.zero_offset)?.zeros),
        None if direct => {
            let (lo, hi) = direct_window(&f, a.tau, a.t, DIRECT_TAIL_TOL)?;
            Some(find_zeros(lo, hi, DEFAULT_TOL)?)
        }
        None => None,
    };
    let sample = linstat_sample(&f, a.tau, a.t, zs.as_ref(), &table)?;
    let zero_window = zs.as_ref().map(|z| [z.t_min(), z.t_max()]);
    document(
        command,
        a,
        g,
        json!({
            "sample": sample,
            "zero_window": zero_window,
            "zero_count": zs.as_ref().map(ZeroSet::len),
            "prime_limit_used": table.limit(),
        }),
    )
}

fn moment_rows(r: &MomentReport) -> String {
    let mut s = String::from("m,value,gaussian_prediction,support_ok,error\n");
    for e in &r.centered_moments {
        s += &format!("{},{:e},{:e},{},{:e}\n", e.m, e.value, e.gaussian_prediction, e.support_ok, e.error);
    }
    s
}

fn moments_run(a: &MomentsArgs, g: &Global) -> Out {
    let f = a.function.build()?;
    let step = match a.grid_step {
        GridStep::Auto => AverageConfig::auto_step(a.t, a.function.alpha, a.mmax).min(AverageConfig::max_step(a.t)),
        GridStep::Fixed(s) => s,
    };
    let cfg = AverageConfig::new(a.t, a.a)?.with_truncation(a.truncation_k)?.with_grid_step(step)?;
    let table = prime_table(&f, &[a.t], g)?;
    let opts = MomentOptions { m_max: a.mmax, histogram_bins: a.hist.then_some(a.bins) };
    let report = moments_with(&f, &cfg, opts, &table)?;
    if a.csv {
        return Ok(moment_rows(&report));
    }
    document("moments run", a, g, json!({ "report": report, "prime_limit_used": table.limit() }))
}

#[derive(Serialize)]
struct DiagRow {
    t: f64,
    diagonal_sum: f64,
    sigma_sq: f64,
    error: f64,
    /// error / error at the previous height.
    error_ratio: Option<f64>,
}

fn diag_check(a: &DiagArgs, g: &Global) -> Out {
    if a.t.is_empty() {
        return Err(Failure::validation("diag check needs at least one height"));
    }
    let f = a.function.build()?;
    let table = prime_table(&f, &a.t, g)?;
    let sigma_sq = f.sigma_sq();
    let mut rows: Vec<DiagRow> = Vec::with_capacity(a.t.len());
    for &t in &a.t {
        let d = diagonal_sum(&f, t, &table)?;
        let error = (d - sigma_sq).abs();
        let error_ratio = rows.last().map(|p| error / p.error);
        rows.push(DiagRow { t, diagonal_sum: d, sigma_sq, error, error_ratio });
    }
    document("diag check", a, g, json!({ "rows": rows, "prime_limit_used": table.limit() }))
}

fn rmt_run(a: &RmtArgs, g: &Global) -> Out {
    let f = a.function.build()?;
    let cfg = CueConfig::new(a.n, a.samples, g.seed)?;
    let samples = CueSamples::generate(&cfg)?;
    let report = cue_moments_from(&f, &samples, a.mmax, a.hist.then_some(a.bins))?;
    if a.csv {
        return Ok(moment_rows(&report));
    }
    document("rmt run", a, g, json!({ "report": report }))
}
