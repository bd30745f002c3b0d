//! Command-line surface for the laboratory. Every data file a command
//! writes is deterministic (fixed column orders, no timestamps) and is
//! accompanied by a `<path>.manifest.json` carrying the invocation, a
//! UTC timestamp, and a SHA-256 digest of each output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cliffordlab::harmonics::{sup_norm, HarmonicSpec, SupNormParams};
use cliffordlab::quadrature::{matrix_element_quadrature, QuadratureGrid};
use cliffordlab::rudin_shapiro::{autocorr_growth_exponent, autocorr_spectrum, generate, Branch};
use cliffordlab::semiclassical::{
    clifford_limit, convergence_study, matrix_element, KPolicy, MatrixElementReport, Method,
    MonomialSymbol,
};
use cliffordlab::verify::{run_suite, CheckOutcome, Suite};
use num_complex::Complex64;
use serde_json::json;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "cliffordlab",
    version,
    about = "Numerical experiments with uniformly bounded spherical harmonics built from Rudin-Shapiro signs"
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Sign-sequence branch
    #[arg(long, global = true, value_enum, default_value = "P", ignore_case = true)]
    branch: BranchArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum BranchArg {
    P,
    Q,
}

impl BranchArg {
    fn core(self) -> Branch {
        match self {
            BranchArg::P => Branch::P,
            BranchArg::Q => Branch::Q,
        }
    }
    fn name(self) -> &'static str {
        match self {
            BranchArg::P => "P",
            BranchArg::Q => "Q",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rudin-Shapiro sign sequences and their autocorrelation growth
    Rs {
        #[command(subcommand)]
        cmd: RsCmd,
    },
    /// Basis-function diagnostics
    Harmonic {
        #[command(subcommand)]
        cmd: HarmonicCmd,
    },
    /// One matrix element of a monomial symbol, as a JSON report
    Matelem(MatelemArgs),
    /// Clifford-torus limit of a monomial symbol, as JSON
    Limit {
        /// Symbol exponents, e.g. g=1,b1=0,b2=0,a=0,x1=0,x2=0 (omitted keys are 0)
        #[arg(long, value_parser = parse_symbol)]
        symbol: MonomialSymbol,
    },
    /// Matrix elements along a dyadic degree ladder with a log-log fit
    Converge(ConvergeArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum RsCmd {
    /// Print the first n signs as a JSON array
    Gen {
        #[arg(long)]
        n: usize,
    },
    /// Sweep autocorrelation maxima over a dyadic ladder of lengths
    Autocorr {
        /// Largest sequence length (ladder runs 64, 128, ... up to this)
        #[arg(long)]
        nmax: usize,
        /// Use the dyadic ladder (the only supported sweep)
        #[arg(long)]
        dyadic: bool,
        /// Output CSV path (columns: n, beta_max_abs_corr, fitted_slope)
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Subcommand)]
enum HarmonicCmd {
    /// Sup-norm scan at one degree
    Supnorm {
        #[arg(long = "N")]
        n: u32,
        /// Basis index; omitted scans k in {0, N/2, N}
        #[arg(long)]
        k: Option<u32>,
        /// Output CSV path (columns: N, k, sup, rho_argmax, phi_argmax)
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Args)]
struct MatelemArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    k: u32,
    /// Symbol exponents, e.g. g=0,b1=1,b2=-1,a=0,x1=0,x2=0 (omitted keys are 0)
    #[arg(long, value_parser = parse_symbol)]
    symbol: MonomialSymbol,
    /// Evaluate with the brute-force quadrature oracle instead of the closed sum
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Symbol exponents, e.g. g=0,b1=1,b2=-1,a=0,x1=0,x2=0 (omitted keys are 0)
    #[arg(long, value_parser = parse_symbol)]
    symbol: MonomialSymbol,
    /// Smallest degree of the dyadic ladder
    #[arg(long)]
    nmin: u32,
    /// Largest degree of the dyadic ladder
    #[arg(long)]
    nmax: u32,
    /// Output CSV path (columns: N, re, im, abs_deviation)
    #[arg(long)]
    csv: PathBuf,
    /// Basis index at each degree
    #[arg(long, value_enum, default_value = "half")]
    k_policy: KPolicyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum KPolicyArg {
    Zero,
    Half,
    Max,
}

impl KPolicyArg {
    fn core(self) -> KPolicy {
        match self {
            KPolicyArg::Zero => KPolicy::Zero,
            KPolicyArg::Half => KPolicy::Half,
            KPolicyArg::Max => KPolicy::Max,
        }
    }
    fn name(self) -> &'static str {
        match self {
            KPolicyArg::Zero => "zero",
            KPolicyArg::Half => "half",
            KPolicyArg::Max => "max",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Override the suite's default tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Exact,
    Oracle,
    Decay,
    Bounded,
}

impl SuiteArg {
    fn core(self) -> Suite {
        match self {
            SuiteArg::Exact => Suite::Exact,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Decay => Suite::Decay,
            SuiteArg::Bounded => Suite::Bounded,
        }
    }
}

fn parse_symbol(text: &str) -> Result<MonomialSymbol, String> {
    let mut s = MonomialSymbol::unit();
    if text.trim().is_empty() {
        return Err("empty symbol; expected key=value pairs from g, b1, b2, a, x1, x2".into());
    }
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("malformed symbol component '{part}'; expected key=value"))?;
        let value = value.trim();
        match key.trim() {
            "g" => s.rho_power = value.parse().map_err(|e| format!("g: {e}"))?,
            "b1" => s.theta1_freq = value.parse().map_err(|e| format!("b1: {e}"))?,
            "b2" => s.theta2_freq = value.parse().map_err(|e| format!("b2: {e}"))?,
            "a" => s.eta_power = value.parse().map_err(|e| format!("a: {e}"))?,
            "x1" => s.xi1_power = value.parse().map_err(|e| format!("x1: {e}"))?,
            "x2" => s.xi2_power = value.parse().map_err(|e| format!("x2: {e}"))?,
            other => {
                return Err(format!(
                    "unknown symbol key '{other}' (expected g, b1, b2, a, x1, x2)"
                ))
            }
        }
    }
    Ok(s)
}

fn symbol_json(s: &MonomialSymbol) -> serde_json::Value {
    json!({
        "g": s.rho_power,
        "b1": s.theta1_freq,
        "b2": s.theta2_freq,
        "a": s.eta_power,
        "x1": s.xi1_power,
        "x2": s.xi2_power,
    })
}

enum Failure {
    Usage(String),
    Core(cliffordlab::Error),
    Io(std::io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Core(_) => 65,
            Failure::Io(_) => 1,
        }
    }
    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

impl From<cliffordlab::Error> for Failure {
    fn from(e: cliffordlab::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(jobs) = cli.jobs {
        // best effort: the global pool can only be sized once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let branch = cli.branch;
    match cli.command {
        Command::Rs { cmd } => match cmd {
            RsCmd::Gen { n } => rs_gen(n, branch),
            RsCmd::Autocorr { nmax, dyadic, csv } => rs_autocorr(nmax, dyadic, &csv, branch),
        },
        Command::Harmonic { cmd } => match cmd {
            HarmonicCmd::Supnorm { n, k, csv } => supnorm(n, k, &csv, branch),
        },
        Command::Matelem(args) => matelem(&args, branch),
        Command::Limit { symbol } => {
            let v = clifford_limit(&symbol);
            println!("{}", serde_json::to_string(&json!({"re": v.re, "im": v.im})).unwrap());
            Ok(0)
        }
        Command::Converge(args) => converge(&args, branch),
        Command::Verify(args) => verify(&args),
    }
}

fn rs_gen(n: usize, branch: BranchArg) -> Result<u8, Failure> {
    let seq = generate(n, branch.core())?;
    println!("{}", serde_json::to_string(seq.values()).unwrap());
    Ok(0)
}

fn dyadic_ladder(start: usize, nmax: usize) -> Vec<usize> {
    let mut ladder = Vec::new();
    let mut n = start;
    while n <= nmax {
        ladder.push(n);
        n *= 2;
    }
    ladder
}

fn rs_autocorr(nmax: usize, dyadic: bool, csv: &Path, branch: BranchArg) -> Result<u8, Failure> {
    if !dyadic {
        return Err(Failure::Usage(
            "only dyadic ladders are supported; pass --dyadic".into(),
        ));
    }
    let ladder = dyadic_ladder(64, nmax);
    let (slope, _) = autocorr_growth_exponent(&ladder, branch.core())?;
    let mut out = String::from("n,beta_max_abs_corr,fitted_slope\n");
    for &n in &ladder {
        let spectrum = autocorr_spectrum(&generate(n, branch.core())?)?;
        let max_corr = spectrum[1..].iter().map(|v| v.abs()).max().unwrap_or(0);
        out.push_str(&format!("{n},{max_corr},{slope:.16e}\n"));
    }
    write_with_manifest(
        csv,
        out.as_bytes(),
        json!({"nmax": nmax, "dyadic": true}),
        branch,
    )?;
    Ok(0)
}

fn supnorm(n: u32, k: Option<u32>, csv: &Path, branch: BranchArg) -> Result<u8, Failure> {
    let ks = match k {
        Some(k) => vec![k],
        None => {
            let mut ks = vec![0, n / 2, n];
            ks.sort_unstable();
            ks.dedup();
            ks
        }
    };
    let params = SupNormParams::default();
    let mut out = String::from("N,k,sup,rho_argmax,phi_argmax\n");
    for &k in &ks {
        let spec = HarmonicSpec::new(n, k, branch.core())?;
        let (sup, at) = sup_norm(&spec, &params);
        out.push_str(&format!(
            "{n},{k},{sup:.16e},{:.16e},{:.16e}\n",
            at.rho, at.theta1
        ));
    }
    write_with_manifest(csv, out.as_bytes(), json!({"N": n, "k": k}), branch)?;
    Ok(0)
}

fn report_json(r: &MatrixElementReport, branch: BranchArg) -> serde_json::Value {
    json!({
        "n": r.n,
        "k": r.k,
        "branch": branch.name(),
        "method": r.method.name(),
        "case": r.case.name(),
        "value": {"re": r.value.re, "im": r.value.im},
        "max_term_magnitude": r.max_term_magnitude,
        "cancellation_ratio": r.cancellation_ratio,
        "precision_flagged": r.precision_flagged(),
    })
}

fn matelem(args: &MatelemArgs, branch: BranchArg) -> Result<u8, Failure> {
    let mut report = matrix_element(args.n, args.k, &args.symbol, branch.core())?;
    if args.oracle {
        let grid = QuadratureGrid::for_matrix_element(args.n, &args.symbol);
        let value =
            matrix_element_quadrature(args.n, args.k, &args.symbol, &grid, branch.core())?;
        report = MatrixElementReport {
            value,
            method: Method::Quadrature,
            max_term_magnitude: value.norm(),
            cancellation_ratio: 1.0,
            ..report
        };
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report_json(&report, branch)).unwrap()
    );
    Ok(0)
}

fn converge(args: &ConvergeArgs, branch: BranchArg) -> Result<u8, Failure> {
    let degrees: Vec<u32> = dyadic_ladder(args.nmin as usize, args.nmax as usize)
        .into_iter()
        .map(|n| n as u32)
        .collect();
    let study = convergence_study(
        &args.symbol,
        &degrees,
        args.k_policy.core(),
        branch.core(),
    )?;
    let mut out = String::from("N,re,im,abs_deviation\n");
    for row in &study.rows {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e}\n",
            row.n, row.value.re, row.value.im, row.deviation
        ));
    }
    write_with_manifest(
        &args.csv,
        out.as_bytes(),
        json!({
            "symbol": symbol_json(&args.symbol),
            "nmin": args.nmin,
            "nmax": args.nmax,
            "k_policy": args.k_policy.name(),
        }),
        branch,
    )?;
    let limit: Complex64 = clifford_limit(&args.symbol);
    let fit = json!({
        "limit": {"re": limit.re, "im": limit.im},
        "slope": study.slope.map(|(s, _)| s),
        "intercept": study.slope.map(|(_, i)| i),
        "exact": study.exact,
    });
    println!("{}", serde_json::to_string_pretty(&fit).unwrap());
    Ok(0)
}

fn print_outcome(c: &CheckOutcome) {
    println!(
        "{}: {} ({:.2}s) {}",
        c.name,
        if c.passed { "PASS" } else { "FAIL" },
        c.seconds,
        c.detail
    );
}

fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let outcomes = run_suite(args.suite.core(), args.tol);
    for c in &outcomes {
        print_outcome(c);
    }
    if outcomes.iter().any(|c| !c.passed) {
        Ok(1)
    } else if outcomes.iter().any(|c| c.flagged) {
        Ok(2)
    } else {
        Ok(0)
    }
}

fn write_with_manifest(
    path: &Path,
    bytes: &[u8],
    parameters: serde_json::Value,
    branch: BranchArg,
) -> Result<(), Failure> {
    std::fs::write(path, bytes)?;
    let digest = Sha256::digest(bytes);
    let sha256: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let manifest = json!({
        "tool": "cliffordlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command_line": std::env::args().collect::<Vec<_>>().join(" "),
        "parameters": parameters,
        "branch": branch.name(),
        "timestamp_utc": chrono::Utc::now().to_rfc3339(),
        "outputs": [{
            "path": path.display().to_string(),
            "sha256": sha256,
            "bytes": bytes.len(),
        }],
    });
    let manifest_path = PathBuf::from(format!("{}.manifest.json", path.display()));
    let mut text = serde_json::to_string_pretty(&manifest).unwrap();
    text.push('\n');
    std::fs::write(manifest_path, text)?;
    Ok(())
}
