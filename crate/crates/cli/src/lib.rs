//! Configuration and commands behind the `hotbang` binary.
//!
//! A run is described by a JSON [`RunConfig`]; every field has a default, so
//! `{}` is a valid configuration. Outputs are CSV (and JSON for the
//! verification suite). Each CSV starts with a `# config_digest: …` comment
//! line followed by a header row; identical configurations give
//! byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use hotbang::hotbang::{conjugate_profile, hotbang_from_profile};
use hotbang::minkowski::FourVector;
use hotbang::quad::QuadConfig;
use hotbang::states::{anticommutator, Numerics, Ordering, StateSpec};
use hotbang::testfn::{random_test_function, BumpFamily, TestFunction};
use hotbang::thermal::{macro_expectation, MacroObservable};
use hotbang::verify::{digest_hex, run_suite, CheckReport, SuiteConfig, Verdict};
use hotbang::Error;
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Positivity,
    Scan,
    Verify,
}

#[derive(Debug, Parser)]
#[command(name = "hotbang", about = "Hot Bang state toolkit: positivity runs, observable scans and verification")]
pub struct Args {
    /// JSON run configuration; defaults apply to every missing field.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the seed of the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; CSV goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Command,
    /// Substring selecting verification checks or scan observables.
    #[arg(long)]
    pub filter: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PositivityConfig {
    /// Number of random functions drawn from the family.
    pub functions: usize,
    pub lambdas: Vec<f64>,
    /// Explicit functions; when non-empty they replace the random family.
    pub explicit: Vec<TestFunction>,
    /// Bound on `|ω(ψ̄ψ) + ω(ψψ̄) − anticommutator|`, relative to the anticommutator.
    pub ordering_sum_tol: f64,
}

impl Default for PositivityConfig {
    fn default() -> Self {
        PositivityConfig { functions: 100, lambdas: vec![0.25, 1.0, 4.0], explicit: Vec::new(), ordering_sum_tol: 1e-6 }
    }
}

/// Evenly spaced points from `start` to `end` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Line {
    pub start: FourVector,
    pub end: FourVector,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub observables: Vec<MacroObservable>,
    pub points: Vec<FourVector>,
    pub line: Option<Line>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            observables: vec![MacroObservable::T2 {}],
            points: Vec::new(),
            line: Some(Line { start: FourVector::new(0.5, 0.0, 0.0, 0.0), end: FourVector::new(4.0, 0.0, 0.0, 0.0), count: 8 }),
        }
    }
}

impl ScanConfig {
    pub fn grid(&self) -> Vec<FourVector> {
        let mut pts = self.points.clone();
        if let Some(l) = &self.line {
            for k in 0..l.count {
                let s = if l.count == 1 { 0.0 } else { k as f64 / (l.count - 1) as f64 };
                pts.push(l.start + s * (l.end - l.start));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub state: StateSpec,
    pub family: BumpFamily,
    pub numerics: Numerics,
    pub positivity: PositivityConfig,
    pub scan: ScanConfig,
    pub verify: SuiteConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            state: StateSpec::Hotbang { lambda: 0.5 },
            family: BumpFamily { terms: 2, ..Default::default() },
            numerics: Numerics { quad: QuadConfig::coarse(), ..Default::default() },
            positivity: PositivityConfig::default(),
            scan: ScanConfig::default(),
            verify: SuiteConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("run configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.verify.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.state.validate()?;
        self.family.validate()?;
        self.numerics.validate()?;
        for &l in &self.positivity.lambdas {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Config(format!("positivity lambda must be positive, got {l}")));
            }
        }
        if self.positivity.ordering_sum_tol.is_nan() || self.positivity.ordering_sum_tol < 0.0 {
            return Err(Error::Config("ordering_sum_tol must be non-negative".into()));
        }
        for xi in &self.scan.observables {
            xi.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if let StateSpec::Hotbang { .. } = self.state {
            for x in self.scan.grid() {
                if !(x.is_finite() && x.is_timelike_future()) {
                    return Err(Error::Config(format!("scan point {:?} lies outside the forward cone", x.0)));
                }
            }
        }
        self.verify.validate()
    }

    pub fn digest(&self) -> String {
        digest_hex(serde_json::to_string(self).expect("configuration serializes").as_bytes())
    }
}

/// One row of the positivity table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityRow {
    pub seed: u64,
    pub lambda: f64,
    pub ordering: Ordering,
    pub value: f64,
    pub tail_bound: f64,
    pub anticommutator: f64,
    pub ordering_sum_residual: f64,
}

impl PositivityRow {
    pub fn passes(&self, tol: f64) -> bool {
        self.value >= -self.tail_bound && self.ordering_sum_residual < tol
    }
}

/// Hot Bang values of `(f̄, f)` for every function, `λ` and ordering.
/// One angular profile per function serves all `λ`.
pub fn positivity_rows(cfg: &RunConfig) -> Result<Vec<PositivityRow>, Error> {
    let functions: Vec<(u64, TestFunction)> = if cfg.positivity.explicit.is_empty() {
        (0..cfg.positivity.functions as u64)
            .map(|k| Ok((cfg.seed.wrapping_add(k), random_test_function(cfg.seed.wrapping_add(k), &cfg.family)?)))
            .collect::<Result<_, Error>>()?
    } else {
        cfg.positivity.explicit.iter().cloned().enumerate().map(|(k, f)| (k as u64, f)).collect()
    };
    let lambdas = &cfg.positivity.lambdas;
    let mut rows = Vec::new();
    if lambdas.is_empty() {
        return Ok(rows);
    }
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min).atan();
    for (seed, f) in functions {
        let anti = anticommutator(&f, &f.conj(), &cfg.numerics.quad)?.re;
        if f.is_zero() {
            for &lambda in lambdas {
                for ordering in Ordering::BOTH {
                    rows.push(PositivityRow { seed, lambda, ordering, value: 0.0, tail_bound: 0.0, anticommutator: 0.0, ordering_sum_residual: 0.0 });
                }
            }
            continue;
        }
        let profile = conjugate_profile(&f, lo, &cfg.numerics)?;
        for &lambda in lambdas {
            let est: Vec<_> = Ordering::BOTH.iter().map(|&o| hotbang_from_profile(&profile, lambda, o, &cfg.numerics.series)).collect::<Result<_, _>>()?;
            let sum = est[0].value + est[1].value;
            let residual = if anti == 0.0 { sum.norm() } else { (sum - anti).norm() / anti.abs() };
            for (ordering, e) in Ordering::BOTH.iter().zip(&est) {
                rows.push(PositivityRow {
                    seed,
                    lambda,
                    ordering: *ordering,
                    value: e.value.re,
                    tail_bound: e.error_bound,
                    anticommutator: anti,
                    ordering_sum_residual: residual,
                });
            }
        }
    }
    Ok(rows)
}

fn csv_preamble(digest: &str, header: &str) -> String {
    format!("# config_digest: {digest}\n{header}\n")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Output of one command: files to write and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<(String, String)>,
}

pub fn command_positivity(cfg: &RunConfig) -> Result<Outcome, Error> {
    let rows = positivity_rows(cfg)?;
    let mut csv = csv_preamble(&cfg.digest(), "seed,lambda,ordering,value,tail_bound,anticommutator,ordering_sum_residual");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{:e},{:e},{:e},{:e}",
            r.seed,
            r.lambda,
            r.ordering.label(),
            r.value,
            r.tail_bound,
            r.anticommutator,
            r.ordering_sum_residual
        )
        .unwrap();
    }
    let ok = rows.iter().all(|r| r.passes(cfg.positivity.ordering_sum_tol));
    Ok(Outcome { code: if ok { EXIT_PASS } else { EXIT_FAIL }, files: vec![("positivity.csv".into(), csv)] })
}

pub fn command_scan(cfg: &RunConfig, filter: Option<&str>) -> Result<Outcome, Error> {
    let mut csv = csv_preamble(&cfg.digest(), "x0,x1,x2,x3,observable,value");
    let observables: Vec<&MacroObservable> = cfg.scan.observables.iter().filter(|o| filter.is_none_or(|f| o.label().contains(f))).collect();
    for x in cfg.scan.grid() {
        for xi in &observables {
            let v = macro_expectation(&cfg.state, xi, &x)?;
            writeln!(csv, "{},{},{},{},{},{:e}", x[0], x[1], x[2], x[3], csv_field(&xi.label()), v).unwrap();
        }
    }
    Ok(Outcome { code: EXIT_PASS, files: vec![("scan.csv".into(), csv)] })
}

#[derive(Debug, Serialize)]
struct Bundle<'a> {
    config_digest: String,
    seed: u64,
    filter: Option<&'a str>,
    passed: bool,
    counts: [(Verdict, usize); 3],
    reports: &'a [CheckReport],
}

pub fn command_verify(cfg: &RunConfig, filter: Option<&str>) -> Result<Outcome, Error> {
    let reports = run_suite(&cfg.verify, filter)?;
    let digest = cfg.digest();
    let passed = reports.iter().all(|r| r.passed());
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let bundle = Bundle {
        config_digest: digest.clone(),
        seed: cfg.seed,
        filter,
        passed,
        counts: [Verdict::Pass, Verdict::Warn, Verdict::Fail].map(|v| (v, count(v))),
        reports: &reports,
    };
    let json = serde_json::to_string_pretty(&bundle).map_err(|e| Error::Config(e.to_string()))? + "\n";
    let mut csv = csv_preamble(&digest, CheckReport::CSV_HEADER);
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    Ok(Outcome { code: if passed { EXIT_PASS } else { EXIT_FAIL }, files: vec![("verify.csv".into(), csv), ("verify.json".into(), json)] })
}

/// Reads and validates the configuration named by `args`, applying the seed override.
pub fn load_config(args: &Args) -> Result<RunConfig, Error> {
    let cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    let seed = args.seed.unwrap_or(cfg.seed);
    let cfg = cfg.with_seed(seed);
    cfg.validate().map_err(|e| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    })?;
    Ok(cfg)
}

/// Caps the global thread pool at `HOTBANG_THREADS` when set.
pub fn configure_threads() -> Result<(), Error> {
    let Ok(text) = std::env::var("HOTBANG_THREADS") else {
        return Ok(());
    };
    let n: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Config(format!("HOTBANG_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Config(e.to_string()))
}

fn write_outputs(out: Option<&Path>, files: &[(String, String)]) -> std::io::Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, content) in files {
                std::fs::write(dir.join(name), content)?;
            }
        }
        None => {
            if let Some((_, csv)) = files.iter().find(|(n, _)| n.ends_with(".csv")) {
                print!("{csv}");
            }
        }
    }
    Ok(())
}

/// Runs one command and returns the process exit code.
pub fn run(args: &Args) -> i32 {
    let cfg = match configure_threads().and_then(|_| load_config(args)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let filter = args.filter.as_deref();
    let result = match args.command {
        Command::Positivity => command_positivity(&cfg),
        Command::Scan => command_scan(&cfg, filter),
        Command::Verify => command_verify(&cfg, filter),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = write_outputs(args.out.as_deref(), &outcome.files) {
                eprintln!("error: cannot write outputs: {e}");
                return EXIT_CONFIG;
            }
            outcome.code
        }
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}
