//! `kzdual`: enumerate weight-block bases, verify the operator-identity
//! suites, and dump individual operator matrices, all in exact rational
//! arithmetic.
//!
//! Exit codes: 0 all checks pass, 1 at least one identity failed, 2 usage or
//! configuration error. Reports are newline-delimited JSON records and are
//! byte-identical for equal configurations and seeds.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use kzdual_core::action::Side;
use kzdual_core::diffop::{coeff, DiffFamily, OpContext};
use kzdual_core::exec::ExecMode;
use kzdual_core::qop::{
    b_matrix, k_matrix, r_matrix, x_matrix, ProjectorSet, RMatrixCache, RMatrixKey,
};
use kzdual_core::rat::Rat;
use kzdual_core::report::{ndjson_line, BasisRecord, BlockMatrixRecord, RMatrixRecord};
use kzdual_core::sample::sample_point;
use kzdual_core::verify::{run_suite, suite_names, SuiteLimits};
use kzdual_core::weights::{enumerate_tables, Margins, WeightBlock};

#[derive(Parser)]
#[command(
    name = "kzdual",
    version,
    about = "Exact verification of KZ/dynamical operator identities and their duality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the table basis of one weight block.
    Basis(BasisArgs),
    /// Run a theorem suite and report one record per (case, margins, trial).
    Verify(VerifyArgs),
    /// Dump a single operator matrix.
    Dump(DumpArgs),
}

#[derive(Args)]
struct BasisArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Comma-separated column sums, length n.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<i64>,
    /// Comma-separated row sums, length k.
    #[arg(long, value_delimiter = ',')]
    mu: Vec<i64>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; `all` runs every suite.
    #[arg(long)]
    suite: String,
    /// Restrict the sweep to this k (default sweeps 2..=3).
    #[arg(long)]
    k: Option<usize>,
    /// Restrict the sweep to this n (default sweeps 2..=3).
    #[arg(long)]
    n: Option<usize>,
    /// Restrict to a single block: comma-separated column sums.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<i64>>,
    /// Restrict to a single block: comma-separated row sums.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<i64>>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sampled points per case.
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Largest total degree |lambda| swept.
    #[arg(long = "degree-max", default_value_t = 4)]
    degree_max: i64,
    /// Worker cap; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Run single-threaded regardless of --jobs.
    #[arg(long, default_value_t = false)]
    sequential: bool,
    /// Projector cache directory (overrides KZDUAL_CACHE_DIR).
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(subcommand)]
    object: DumpObject,
}

#[derive(Subcommand)]
enum DumpObject {
    /// R-matrix on the pair basis of V_l (x) V_m over gl_N.
    Rmatrix {
        #[arg(long = "N")]
        n_vars: usize,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        /// Spectral parameter, as a rational literal like `3` or `5/2`.
        #[arg(long)]
        t: Rat,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// B-series matrix B_ab(t) on one weight block.
    Bmatrix {
        #[arg(long, default_value = "glk")]
        side: String,
        /// 1-based generator indices.
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        t: Rat,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        mu: Vec<i64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// X product at a seeded parameter point.
    Xmatrix {
        #[arg(long, default_value = "glk")]
        side: String,
        /// 1-based dynamical index.
        #[arg(long)]
        a: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        mu: Vec<i64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// K product at a seeded parameter point.
    Kmatrix {
        #[arg(long, default_value = "glk")]
        side: String,
        /// 1-based factor index.
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        mu: Vec<i64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Differential-family coefficient matrix at a seeded point.
    Coeff {
        /// One of kz-rat, kz-trig, dd-rat, dd-trig.
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "glk")]
        side: String,
        /// 1-based operator index.
        #[arg(long)]
        index: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        mu: Vec<i64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn write_lines(output: Option<&Path>, lines: &[String]) -> std::io::Result<()> {
    let body = lines.join("\n") + "\n";
    match output {
        Some(path) => fs::write(path, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
        }
    }
}

fn parse_side(s: &str) -> Option<Side> {
    match s {
        "glk" => Some(Side::Glk),
        "gln" => Some(Side::Gln),
        _ => None,
    }
}

fn make_margins(k: usize, n: usize, lambda: &[i64], mu: &[i64]) -> Result<Margins, String> {
    if lambda.len() != n {
        return Err(format!(
            "lambda has {} entries, expected n = {n}",
            lambda.len()
        ));
    }
    if mu.len() != k {
        return Err(format!("mu has {} entries, expected k = {k}", mu.len()));
    }
    if lambda.iter().chain(mu).any(|&v| v < 0) {
        return Err("margins must be nonnegative".to_string());
    }
    Ok(Margins::new(k, n, lambda.to_vec(), mu.to_vec()))
}

fn block_of(margins: &Margins) -> Arc<WeightBlock> {
    Arc::new(enumerate_tables(margins))
}

fn cache_dir_from(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("KZDUAL_CACHE_DIR").map(PathBuf::from))
}

fn cache_file_name(key: &RMatrixKey) -> String {
    format!("rproj-N{}-l{}-m{}.json", key.n_vars, key.l, key.m)
}

/// Preload every projector set found in the cache directory.
fn load_cache(dir: &Path, cache: &RMatrixCache) -> std::io::Result<()> {
    if !dir.exists() {
        return Ok(());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && p.file_name()
                    .and_then(|f| f.to_str())
                    .is_some_and(|f| f.starts_with("rproj-"))
        })
        .collect();
    paths.sort();
    for path in paths {
        let body = fs::read_to_string(&path)?;
        match serde_json::from_str::<ProjectorSet>(&body) {
            Ok(set) => cache.insert(set),
            Err(e) => eprintln!("warning: ignoring cache file {path:?}: {e}"),
        }
    }
    Ok(())
}

/// Persist every projector set built during the run.
fn store_cache(dir: &Path, cache: &RMatrixCache) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for set in cache.snapshot() {
        let path = dir.join(cache_file_name(&set.key));
        let body = serde_json::to_string(&*set).expect("projector serialization");
        fs::write(path, body)?;
    }
    Ok(())
}

fn cmd_basis(args: &BasisArgs) -> ExitCode {
    let margins = match make_margins(args.k, args.n, &args.lambda, &args.mu) {
        Ok(m) => m,
        Err(e) => return usage_error(&e),
    };
    let block = enumerate_tables(&margins);
    let line = ndjson_line(&BasisRecord::new(&block));
    match write_lines(args.output.as_deref(), &[line]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => usage_error(&format!("cannot write output: {e}")),
    }
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    if !suite_names().contains(&args.suite.as_str()) {
        return usage_error(&format!(
            "unknown suite `{}`; valid suites: {}",
            args.suite,
            suite_names().join(", ")
        ));
    }
    let fixed_margins = match (&args.lambda, &args.mu) {
        (None, None) => None,
        (Some(lambda), Some(mu)) => {
            if let Some(k) = args.k {
                if mu.len() != k {
                    return usage_error("mu length must equal k");
                }
            }
            if let Some(n) = args.n {
                if lambda.len() != n {
                    return usage_error("lambda length must equal n");
                }
            }
            // Mismatched sums address an empty block, which is a valid
            // (vacuously passing) target.
            Some((lambda.clone(), mu.clone()))
        }
        _ => return usage_error("provide both --lambda and --mu, or neither"),
    };
    let defaults = SuiteLimits::default();
    let limits = SuiteLimits {
        k_values: args.k.map(|k| vec![k]).unwrap_or(defaults.k_values),
        n_values: args.n.map(|n| vec![n]).unwrap_or(defaults.n_values),
        degree_max: args.degree_max,
        trials: args.trials,
        seed: args.seed,
        fixed_margins,
    };
    let mode = if args.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel { jobs: args.jobs }
    };
    let cache = RMatrixCache::new();
    let cache_dir = cache_dir_from(args.cache_dir.clone());
    if let Some(dir) = &cache_dir {
        if let Err(e) = load_cache(dir, &cache) {
            return usage_error(&format!("cannot read cache dir: {e}"));
        }
    }
    let mut reports = match run_suite(&args.suite, &limits, mode, &cache) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    // Self-test hook: lets the exit-code contract be exercised end to end.
    // The injected record is clearly labeled and never produced otherwise.
    if std::env::var_os("KZDUAL_SELFTEST_INJECT_FAILURE").is_some() {
        if let Some(mut r) = reports.last().cloned() {
            r.case = "selftest-injected-failure".to_string();
            r.status = "fail";
            reports.push(r);
        }
    }
    if let Some(dir) = &cache_dir {
        if let Err(e) = store_cache(dir, &cache) {
            return usage_error(&format!("cannot write cache dir: {e}"));
        }
    }
    let lines: Vec<String> = reports.iter().map(ndjson_line).collect();
    if let Err(e) = write_lines(args.output.as_deref(), &lines) {
        return usage_error(&format!("cannot write output: {e}"));
    }
    let failures = reports.iter().filter(|r| !r.passed()).count();
    let total = reports.len();
    eprintln!(
        "suite {}: {} checks, {} failed",
        args.suite, total, failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn one_based(idx: usize, what: &str) -> Result<usize, String> {
    idx.checked_sub(1)
        .ok_or_else(|| format!("{what} is 1-based and must be positive"))
}

fn cmd_dump(args: &DumpArgs) -> ExitCode {
    match &args.object {
        DumpObject::Rmatrix {
            n_vars,
            l,
            m,
            t,
            cache_dir,
            output,
        } => {
            let cache = RMatrixCache::new();
            let dir = cache_dir_from(cache_dir.clone());
            if let Some(d) = &dir {
                if let Err(e) = load_cache(d, &cache) {
                    return usage_error(&format!("cannot read cache dir: {e}"));
                }
            }
            let key = RMatrixKey {
                n_vars: *n_vars,
                l: *l,
                m: *m,
            };
            let matrix = match r_matrix(key, t, &cache) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            if let Some(d) = &dir {
                if let Err(e) = store_cache(d, &cache) {
                    return usage_error(&format!("cannot write cache dir: {e}"));
                }
            }
            let rec = RMatrixRecord {
                schema_version: 1,
                record: "rmatrix",
                key,
                t: t.clone(),
                matrix,
            };
            match write_lines(output.as_deref(), &[ndjson_line(&rec)]) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        DumpObject::Bmatrix {
            side,
            a,
            b,
            t,
            k,
            n,
            lambda,
            mu,
            output,
        } => {
            let Some(side_v) = parse_side(side) else {
                return usage_error("side must be glk or gln");
            };
            let margins = match make_margins(*k, *n, lambda, mu) {
                Ok(m) => m,
                Err(e) => return usage_error(&e),
            };
            let (a0, b0) = match (one_based(*a, "a"), one_based(*b, "b")) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return usage_error("indices are 1-based"),
            };
            if a0 == b0 {
                return usage_error("a and b must differ");
            }
            let block = block_of(&margins);
            let matrix = match b_matrix(side_v, a0, b0, t, &block) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            let mut rec = BlockMatrixRecord::new("bmatrix", side, vec![*a, *b], &margins, matrix);
            rec.t = Some(t.clone());
            match write_lines(output.as_deref(), &[ndjson_line(&rec)]) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        DumpObject::Xmatrix {
            side,
            a,
            k,
            n,
            lambda,
            mu,
            seed,
            output,
        } => {
            let Some(side_v) = parse_side(side) else {
                return usage_error("side must be glk or gln");
            };
            let margins = match make_margins(*k, *n, lambda, mu) {
                Ok(m) => m,
                Err(e) => return usage_error(&e),
            };
            let Ok(a0) = one_based(*a, "a") else {
                return usage_error("a is 1-based");
            };
            let block = block_of(&margins);
            let point = sample_point(*seed, *n, *k, true, margins.total_degree() + 1);
            let matrix = match x_matrix(side_v, a0, &block, &point) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            let mut rec = BlockMatrixRecord::new("xmatrix", side, vec![*a], &margins, matrix);
            rec.point = Some(point);
            match write_lines(output.as_deref(), &[ndjson_line(&rec)]) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        DumpObject::Kmatrix {
            side,
            i,
            k,
            n,
            lambda,
            mu,
            seed,
            cache_dir,
            output,
        } => {
            let Some(side_v) = parse_side(side) else {
                return usage_error("side must be glk or gln");
            };
            let margins = match make_margins(*k, *n, lambda, mu) {
                Ok(m) => m,
                Err(e) => return usage_error(&e),
            };
            let Ok(i0) = one_based(*i, "i") else {
                return usage_error("i is 1-based");
            };
            let cache = RMatrixCache::new();
            let dir = cache_dir_from(cache_dir.clone());
            if let Some(d) = &dir {
                if let Err(e) = load_cache(d, &cache) {
                    return usage_error(&format!("cannot read cache dir: {e}"));
                }
            }
            let block = block_of(&margins);
            let point = sample_point(*seed, *n, *k, true, margins.total_degree() + 1);
            let matrix = match k_matrix(side_v, i0, &block, &point, &cache) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            if let Some(d) = &dir {
                if let Err(e) = store_cache(d, &cache) {
                    return usage_error(&format!("cannot write cache dir: {e}"));
                }
            }
            let mut rec = BlockMatrixRecord::new("kmatrix", side, vec![*i], &margins, matrix);
            rec.point = Some(point);
            match write_lines(output.as_deref(), &[ndjson_line(&rec)]) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        DumpObject::Coeff {
            family,
            side,
            index,
            k,
            n,
            lambda,
            mu,
            seed,
            output,
        } => {
            let Some(side_v) = parse_side(side) else {
                return usage_error("side must be glk or gln");
            };
            let Some(fam) = DiffFamily::parse(family) else {
                return usage_error("family must be one of kz-rat, kz-trig, dd-rat, dd-trig");
            };
            let margins = match make_margins(*k, *n, lambda, mu) {
                Ok(m) => m,
                Err(e) => return usage_error(&e),
            };
            let Ok(idx0) = one_based(*index, "index") else {
                return usage_error("index is 1-based");
            };
            let block = block_of(&margins);
            let point = sample_point(*seed, *n, *k, true, margins.total_degree() + 1);
            let ctx = OpContext::new(side_v, &block, &point);
            let matrix = match coeff(fam, idx0, &ctx) {
                Ok(m) => m,
                Err(e) => return usage_error(&e.to_string()),
            };
            let mut rec = BlockMatrixRecord::new("coeff", side, vec![*index], &margins, matrix);
            rec.family = Some(family.clone());
            rec.point = Some(point);
            match write_lines(output.as_deref(), &[ndjson_line(&rec)]) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Basis(args) => cmd_basis(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Dump(args) => cmd_dump(args),
    }
}
