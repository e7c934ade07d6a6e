//! `conecheck`: catalog listing, randomized checks, refutation, numeric
//! certificates and the acceptance suite.
//!
//! Exit codes: 0 no violation / certified / suite passed, 1 violation /
//! refused / suite failed, 2 usage error, 3 numeric failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conecheck::catalog::{builtin_entries, summarize, ParamValue};
use conecheck::certify::{
    certify_differential_monotone, certify_hessian_sign, certify_laplace, certify_topkis, Certificate,
    LaplaceCertificate, Lattice, Monotone, Sign,
};
use conecheck::check::{check, refute, CheckConfig, CheckReport};
use conecheck::suite::{RunManifest, SuiteOptions};
use conecheck::{instantiate, lookup, ConeSpec, Error, Params, PropertyLabel};
use serde::Serialize;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "conecheck", version, about = "Property checks and numeric certificates for functions on convex cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Randomized check of a property.
    Check(CheckArgs),
    /// Search for a counterexample: a structured scan, then a scale ladder.
    Refute(CheckArgs),
    /// Sampled sufficient-condition certificate.
    Certify(CertifyArgs),
    /// Run the acceptance suite and write a manifest.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum CatalogAction {
    /// One JSON line per builtin entry.
    List {
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    scale: Option<f64>,
    /// Highest difference order for complete monotonicity.
    #[arg(long)]
    order_cap: Option<usize>,
    /// JSON file with CheckConfig keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Human-readable output.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct Target {
    /// Catalog id.
    id: String,
    #[arg(long)]
    dim: Option<usize>,
    /// Entry parameter as name=value; values are JSON or bare text.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    target: Target,
    /// Property label, e.g. strong-subadd or COMPLETELY_MONOTONE(K=7).
    #[arg(long)]
    property: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Condition {
    HessianNonpos,
    HessianNonneg,
    TopkisSubmodular,
    TopkisSupermodular,
    DifferentialNonincreasing,
    DifferentialNondecreasing,
}

#[derive(Args)]
struct CertifyArgs {
    /// Catalog id; omit with --laplace.
    id: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long, value_enum)]
    condition: Option<Condition>,
    /// Number of sampled points (pairs for differential conditions).
    #[arg(long, default_value_t = 500)]
    points: u64,
    /// JSON file of Laplace atoms `[[w, u], ...]`.
    #[arg(long, conflicts_with_all = ["id", "condition"])]
    laplace: Option<PathBuf>,
    /// Cone of the Laplace atoms: `nonneg:N`, `psd:N`, `grid:M`.
    #[arg(long, requires = "laplace")]
    cone: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the manifest here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Apply runtime budgets and record wall times.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    pretty: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric(_) | Error::Domain(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Where a report goes. The file is created before any work starts so an
/// unwritable path fails fast.
enum Sink {
    Stdout,
    File(PathBuf, BufWriter<File>),
}

impl Sink {
    fn open(path: Option<&Path>) -> Result<Self, Failure> {
        match path {
            None => Ok(Sink::Stdout),
            Some(p) => File::create(p)
                .map(|f| Sink::File(p.to_path_buf(), BufWriter::new(f)))
                .map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        }
    }

    fn is_stdout(&self) -> bool {
        matches!(self, Sink::Stdout)
    }

    fn line<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let text = serde_json::to_string(value).map_err(|e| usage(e.to_string()))?;
        let res = match self {
            Sink::Stdout => writeln!(io::stdout().lock(), "{text}"),
            Sink::File(_, w) => writeln!(w, "{text}").and_then(|_| w.flush()),
        };
        match res {
            // a closed pipe (e.g. `| head`) is not an error
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| usage(format!("write failed: {e}"))),
        }
    }

    fn path(&self) -> Option<&Path> {
        match self {
            Sink::Stdout => None,
            Sink::File(p, _) => Some(p),
        }
    }
}

fn load_config(common: &Common) -> Result<CheckConfig, Failure> {
    let mut cfg = match &common.config {
        None => CheckConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", p.display())))?
        }
    };
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(s) = common.scale {
        cfg.scale = s;
    }
    if let Some(k) = common.order_cap {
        cfg.order_cap = k;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_params(raw: &[String]) -> Result<Params, Failure> {
    let mut params = Params::new();
    for kv in raw {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| usage(format!("--param expects NAME=VALUE, got `{kv}`")))?;
        params = params.with(k.trim(), ParamValue::parse_cli(v.trim()));
    }
    Ok(params)
}

fn instance(id: &str, dim: Option<usize>, raw: &[String]) -> Result<conecheck::Instance, Failure> {
    let params = parse_params(raw)?;
    Ok(instantiate(lookup(id)?, &params, dim)?)
}

fn parse_cone(spec: &str) -> Result<ConeSpec, Failure> {
    let bad = || usage(format!("cone `{spec}` is not one of nonneg:N, psd:N, grid:M"));
    let (family, n) = spec.split_once(':').ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    let cone = match family {
        "nonneg" => ConeSpec::NonnegOrthant(n),
        "psd" => ConeSpec::Psd(n),
        "grid" => ConeSpec::grid_lp(n, 2.0, 1.0 / n.max(1) as f64)?,
        _ => return Err(bad()),
    };
    cone.validate()?;
    Ok(cone)
}

/// The JSON spelling of a unit enum, e.g. `NO_VIOLATION_FOUND`.
fn tag<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn print_report(r: &CheckReport) {
    println!("property      {}", r.property);
    println!("verdict       {}", tag(&r.verdict));
    println!("trials        {} ({} skipped)", r.trials, r.skipped);
    println!("worst margin  {:.6e}", r.worst_margin);
    if let Some(w) = &r.witness {
        println!("inequality    {}", w.expression);
        println!("margin        {:.6e}", w.margin);
        for (name, p) in &w.points {
            println!("  {name:<6} {}", serde_json::to_string(p).unwrap_or_default());
        }
    }
}

fn print_certificate(c: &Certificate) {
    println!("method        {}", tag(&c.method));
    println!("target        {}", c.target);
    println!("verdict       {}", tag(&c.verdict));
    println!("points        {} (seed {}, {} redrawn)", c.sample_points.count, c.sample_points.seed, c.sample_points.resampled);
    if let Some(w) = &c.refusal_witness {
        println!("refused       {}", w.reason);
        if let Some([i, j]) = w.entry {
            println!("entry         ({i}, {j})");
        }
        for (name, p) in &w.points {
            println!("  {name:<11} {}", serde_json::to_string(p).unwrap_or_default());
        }
    }
}

fn cmd_catalog_list(pretty: bool) -> Result<u8, Failure> {
    let mut out = Sink::Stdout;
    for entry in builtin_entries() {
        let s = summarize(entry)?;
        if pretty {
            let labels: Vec<String> = s.labels.iter().map(|l| l.to_string()).collect();
            println!("{:<24} {:<16} {}", s.id, s.domain.family(), labels.join(", "));
        } else {
            out.line(&s)?;
        }
    }
    Ok(0)
}

fn cmd_check(args: &CheckArgs, refuting: bool) -> Result<u8, Failure> {
    let mut sink = Sink::open(args.common.json.as_deref())?;
    let cfg = load_config(&args.common)?;
    let property: PropertyLabel = args.property.parse()?;
    let property = match property {
        PropertyLabel::CompletelyMonotone { .. } if !args.property.contains(['(', ':']) => {
            PropertyLabel::CompletelyMonotone { order_cap: cfg.order_cap }
        }
        p => p,
    };
    let f = instance(&args.target.id, args.target.dim, &args.target.params)?;
    let r = if refuting {
        refute(&f.handle, &property, &cfg)?
    } else {
        check(&f.handle, &property, &cfg)?
    };
    if args.common.pretty && sink.is_stdout() {
        print_report(&r);
    } else {
        sink.line(&r)?;
    }
    Ok(if r.violated() { EXIT_VIOLATION } else { 0 })
}

fn cmd_certify(args: &CertifyArgs) -> Result<u8, Failure> {
    let mut sink = Sink::open(args.common.json.as_deref())?;
    let cfg = load_config(&args.common)?;
    let c = if let Some(path) = &args.laplace {
        let cone = parse_cone(args.cone.as_deref().ok_or_else(|| usage("--laplace needs --cone"))?)?;
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let cert: LaplaceCertificate =
            serde_json::from_str(&text).map_err(|e| usage(format!("bad atoms {}: {e}", path.display())))?;
        certify_laplace(&cert, &cone, &cfg)?
    } else {
        let id = args.id.as_deref().ok_or_else(|| usage("certify needs a catalog id or --laplace"))?;
        let condition = args.condition.ok_or_else(|| usage("certify needs --condition"))?;
        let f = instance(id, args.dim, &args.params)?;
        let h = &f.handle;
        match condition {
            Condition::HessianNonpos => certify_hessian_sign(h, Sign::Nonpos, args.points, &cfg)?,
            Condition::HessianNonneg => certify_hessian_sign(h, Sign::Nonneg, args.points, &cfg)?,
            Condition::TopkisSubmodular => certify_topkis(h, Lattice::Submodular, args.points, &cfg)?,
            Condition::TopkisSupermodular => certify_topkis(h, Lattice::Supermodular, args.points, &cfg)?,
            Condition::DifferentialNonincreasing => {
                certify_differential_monotone(h, Monotone::Nonincreasing, args.points, &cfg)?
            }
            Condition::DifferentialNondecreasing => {
                certify_differential_monotone(h, Monotone::Nondecreasing, args.points, &cfg)?
            }
        }
    };
    if args.common.pretty && sink.is_stdout() {
        print_certificate(&c);
    } else {
        sink.line(&c)?;
    }
    Ok(if c.certified() { 0 } else { EXIT_VIOLATION })
}

fn cmd_suite(args: &SuiteArgs) -> Result<u8, Failure> {
    let mut sink = Sink::open(args.json.as_deref())?;
    let command: Vec<String> = std::env::args().collect();
    let m = RunManifest::run(
        command,
        &SuiteOptions {
            seed: args.seed,
            timing: args.timing,
        },
    );
    let human = args.pretty || !sink.is_stdout();
    if human {
        for c in &m.criteria {
            let status = if c.pass { "PASS" } else { "FAIL" };
            match c.seconds {
                Some(s) => println!("{status} criterion {:>2} ({}): {} [{s:.2} s]", c.id, c.title, c.detail),
                None => println!("{status} criterion {:>2} ({}): {}", c.id, c.title, c.detail),
            }
        }
    }
    if !(args.pretty && sink.is_stdout()) {
        sink.line(&m)?;
    }
    if let Some(p) = sink.path() {
        println!("manifest written to {}", p.display());
    }
    Ok(if m.passed { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Catalog {
            action: CatalogAction::List { pretty },
        } => cmd_catalog_list(*pretty),
        Command::Check(a) => cmd_check(a, false),
        Command::Refute(a) => cmd_check(a, true),
        Command::Certify(a) => cmd_certify(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
