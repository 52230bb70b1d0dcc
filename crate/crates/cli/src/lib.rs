//! Command-line front end: argument parsing, dispatch and output encoding.
//!
//! [`run`] is pure with respect to the process: it returns the encoded
//! output, the diagnostics and the exit code, and leaves writing them to
//! the caller.

pub mod scan;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qdeform::io::{format_f64, to_json};
use qdeform::rep::DEFAULT_TRUNCATION;
use qdeform::reducibility::DEFAULT_SCAN_DEPTH;
use qdeform::{
    build_rep, integer_roots, locus_solve, pq_bracket, q_bracket, resolve_convention,
    verify_relations, DeformationVariant, HighestWeight, Params, RhsConvention,
};
use serde::Serialize;

use crate::scan::{run_scan, AxisRange, ScanGrid, ScanQuantity, ScanSetup};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const TOL_ENV: &str = "QDEFORM_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qdeform", version, about = "Highest-weight representations of sl(2) and its quantum deformations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Tolerance for residual checks and root detection [env: QDEFORM_TOL, default 1e-10].
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output encoding (scan defaults to csv, everything else to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate [x]_q, or [x]_pq when --p is given.
    Bracket(BracketArgs),
    /// Build the truncated H, E+, E- matrices.
    Build(RepArgs),
    /// Build and check the defining relations.
    Verify(VerifyArgs),
    /// Scan f(n) for positive integer roots (U^(2)_pq only).
    Roots(RootsArgs),
    /// Solve for real p that makes f(target_n) vanish at fixed q.
    Locus(LocusArgs),
    /// Evaluate a quantity over a (p, q) grid.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BracketArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub p: Option<Complex64>,
}

#[derive(Debug, Clone, Args)]
pub struct ModuleArgs {
    /// classical, q, v1 or v2.
    #[arg(long, value_parser = parse_variant)]
    pub variant: DeformationVariant,
    /// Highest weight as a fraction ("3/2") or decimal ("1.5").
    #[arg(long, value_parser = parse_weight)]
    pub j: HighestWeight,
    /// Complex parameter p ("1.5" or "1.5+0.2i"); ignored by classical and q.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub p: Option<Complex64>,
    /// Complex parameter q; ignored by classical.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Option<Complex64>,
}

#[derive(Debug, Clone, Args)]
pub struct RepArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Truncation depth: basis states n = 0..=N.
    #[arg(long = "N", visible_alias = "truncation", default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionChoice {
    /// (q/p)^{J-H} and [2H]_pq, the reading the matrix elements satisfy.
    Consistent,
    /// (p/q)^{J-H} and [H]_pq, as printed.
    Literal,
    /// Decide from residuals.
    Auto,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub rep: RepArgs,
    #[arg(long, value_enum, default_value_t = ConventionChoice::Consistent)]
    pub convention: ConventionChoice,
}

#[derive(Debug, Clone, Args)]
pub struct RootsArgs {
    #[arg(long, value_parser = parse_variant, default_value = "v2")]
    pub variant: DeformationVariant,
    #[arg(long, value_parser = parse_weight)]
    pub j: HighestWeight,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub p: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Complex64,
    #[arg(long, default_value_t = DEFAULT_SCAN_DEPTH)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct LocusArgs {
    #[arg(long)]
    pub target_n: usize,
    #[arg(long, value_parser = parse_weight)]
    pub j: HighestWeight,
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub p_lo: f64,
    #[arg(long)]
    pub p_hi: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_variant, default_value = "v2")]
    pub variant: DeformationVariant,
    #[arg(long, value_parser = parse_weight)]
    pub j: HighestWeight,
    /// lo,hi,steps
    #[arg(long)]
    pub p_range: AxisRange,
    /// lo,hi,steps
    #[arg(long)]
    pub q_range: AxisRange,
    #[arg(long, value_enum, default_value_t = ScanQuantity::RootCount)]
    pub quantity: ScanQuantity,
    #[arg(long, default_value_t = DEFAULT_SCAN_DEPTH)]
    pub n_max: usize,
    #[arg(long = "N", visible_alias = "truncation", default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    /// Worker threads for the grid (output does not depend on it).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

fn parse_variant(s: &str) -> Result<DeformationVariant, String> {
    s.parse().map_err(|e: qdeform::Error| e.to_string())
}

fn parse_weight(s: &str) -> Result<HighestWeight, String> {
    s.parse().map_err(|e: qdeform::Error| e.to_string())
}

/// `"1.5"`, `"-0.3+2i"`, `"i"`, ...
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let z: Complex64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a complex number (use a+bi)"))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Everything [`run`] needs, resolved from flags and the environment.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub tol: f64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// `--tol` wins over `QDEFORM_TOL`, which wins over the default.
    pub fn from_cli(cli: Cli, env_tol: Option<&str>) -> Result<Self, String> {
        let tol = match (cli.tol, env_tol) {
            (Some(t), _) => t,
            (None, Some(s)) => s
                .trim()
                .parse()
                .map_err(|_| format!("{TOL_ENV}=`{s}` is not a number"))?,
            (None, None) => DEFAULT_TOL,
        };
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(format!("tolerance must be positive, got {tol}"));
        }
        let format = cli.format.unwrap_or(match cli.command {
            Command::Scan(_) => OutputFormat::Csv,
            _ => OutputFormat::Json,
        });
        Ok(RunConfig {
            command: cli.command,
            tol,
            format,
            output: cli.output,
        })
    }

    pub fn parse_from<I, T>(args: I, env_tol: Option<&str>) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        RunConfig::from_cli(cli, env_tol)
            .map_err(|msg| clap::Error::raw(clap::error::ErrorKind::ValueValidation, msg))
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub diagnostics: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            code: EXIT_OK,
            output,
            diagnostics: String::new(),
        }
    }

    fn fail(code: i32, diagnostics: impl Into<String>) -> Self {
        Outcome {
            code,
            output: String::new(),
            diagnostics: diagnostics.into(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &qdeform::Error) -> i32 {
    use qdeform::Error::*;
    match err {
        DegenerateParameter(_) | IllConditioned(_) | NonFinite(_) => EXIT_DEGENERATE,
        InvalidWeight(_) | InvalidArgument(_) | NotApplicable(_) => EXIT_USAGE,
        ZeroNorm { .. } | Unresolved { .. } | NoSignChange { .. } | MaxIterations { .. }
        | NotARoot { .. } => EXIT_CHECK_FAILED,
    }
}

enum Failure {
    Usage(String),
    Lib(qdeform::Error),
}

impl From<qdeform::Error> for Failure {
    fn from(e: qdeform::Error) -> Self {
        Failure::Lib(e)
    }
}

type Step<T> = Result<T, Failure>;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = to_json(value).expect("reports serialize");
    s.push('\n');
    s
}

fn module_params(args: &ModuleArgs) -> Step<Params> {
    let one = Complex64::new(1.0, 0.0);
    match args.variant {
        DeformationVariant::Classical => Ok(Params::new(args.p.unwrap_or(one), args.q.unwrap_or(one))),
        DeformationVariant::OneParamQ => {
            let q = args.q.ok_or_else(|| Failure::Usage("--q is required for variant q".into()))?;
            Ok(Params::new(args.p.unwrap_or(q), q))
        }
        v => match (args.p, args.q) {
            (Some(p), Some(q)) => Ok(Params::new(p, q)),
            _ => Err(Failure::Usage(format!("--p and --q are required for variant {v}"))),
        },
    }
}

#[derive(Serialize)]
struct BracketReport {
    kind: &'static str,
    #[serde(with = "qdeform::io::complex")]
    x: Complex64,
    #[serde(serialize_with = "optional_complex")]
    p: Option<Complex64>,
    #[serde(with = "qdeform::io::complex")]
    q: Complex64,
    #[serde(with = "qdeform::io::complex")]
    value: Complex64,
}

fn optional_complex<S: serde::Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    match z {
        Some(z) => qdeform::io::complex::serialize(z, s),
        None => s.serialize_none(),
    }
}

#[derive(Serialize)]
struct ScanReport<'a> {
    variant: DeformationVariant,
    j: HighestWeight,
    grid: &'a ScanGrid,
    rows: &'a [scan::ScanRow],
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

fn require_json(config: &RunConfig, what: &str) -> Step<()> {
    match config.format {
        OutputFormat::Json => Ok(()),
        OutputFormat::Csv => Err(Failure::Usage(format!(
            "{what} output is JSON only; csv is available for build, roots and scan"
        ))),
    }
}

fn dispatch(config: &RunConfig) -> Step<Outcome> {
    let tol = config.tol;
    match &config.command {
        Command::Bracket(args) => {
            require_json(config, "bracket")?;
            let (kind, value) = match args.p {
                Some(p) => ("pq", pq_bracket(args.x, p, args.q)?),
                None => ("q", q_bracket(args.x, args.q)?),
            };
            Ok(Outcome::ok(json(&BracketReport {
                kind,
                x: args.x,
                p: args.p,
                q: args.q,
                value,
            })))
        }
        Command::Build(args) => {
            let params = module_params(&args.module)?;
            let rep = build_rep(
                args.module.variant,
                args.module.j,
                &params,
                args.truncation,
                RhsConvention::default(),
            )?;
            Ok(Outcome::ok(match config.format {
                OutputFormat::Json => json(&rep),
                OutputFormat::Csv => {
                    let mut rows = Vec::new();
                    for (name, m) in [("H", rep.h()), ("Eplus", rep.eplus()), ("Eminus", rep.eminus())] {
                        for ((r, c), z) in m.indexed_iter() {
                            if z.norm() != 0.0 {
                                rows.push(vec![
                                    name.to_string(),
                                    r.to_string(),
                                    c.to_string(),
                                    format_f64(z.re),
                                    format_f64(z.im),
                                ]);
                            }
                        }
                    }
                    csv_text(&["operator", "row", "col", "re", "im"], rows)
                }
            }))
        }
        Command::Verify(args) => {
            require_json(config, "verify")?;
            let module = &args.rep.module;
            let params = module_params(module)?;
            let conv = match args.convention {
                ConventionChoice::Consistent => RhsConvention::CONSISTENT,
                ConventionChoice::Literal => RhsConvention::LITERAL,
                ConventionChoice::Auto => resolve_convention(module.j, &params, args.rep.truncation)?,
            };
            let rep = build_rep(module.variant, module.j, &params, args.rep.truncation, conv)?;
            let report = verify_relations(&rep, conv)?;
            let mut outcome = Outcome::ok(json(&report));
            if report.max_residual() > tol {
                outcome.code = EXIT_CHECK_FAILED;
                outcome.diagnostics = format!(
                    "residual {:e} exceeds tolerance {tol:e}",
                    report.max_residual()
                );
            }
            Ok(outcome)
        }
        Command::Roots(args) => {
            if args.variant != DeformationVariant::TwoParamV2 {
                return Err(Failure::Usage(
                    "roots applies to variant v2 only; the other modules are finite".into(),
                ));
            }
            let scan = integer_roots(args.j, &Params::new(args.p, args.q), args.n_max, tol)?;
            Ok(Outcome::ok(match config.format {
                OutputFormat::Json => json(&scan),
                OutputFormat::Csv => csv_text(
                    &["n", "f_re", "f_im", "root"],
                    scan.f_values.iter().map(|v| {
                        vec![
                            v.n.to_string(),
                            format_f64(v.value.re),
                            format_f64(v.value.im),
                            scan.roots.contains(&v.n).to_string(),
                        ]
                    }),
                ),
            }))
        }
        Command::Locus(args) => {
            require_json(config, "locus")?;
            let sol = locus_solve(args.target_n, args.j, args.q, (args.p_lo, args.p_hi), tol, args.max_iter)?;
            Ok(Outcome::ok(json(&sol)))
        }
        Command::Scan(args) => {
            let grid = ScanGrid {
                p_range: args.p_range,
                q_range: args.q_range,
                quantity: args.quantity,
            };
            let setup = ScanSetup {
                variant: args.variant,
                j: args.j,
                n_max: args.n_max,
                truncation: args.truncation,
                tol,
            };
            if args.n_max < 1 {
                return Err(Failure::Usage("--n-max must be at least 1".into()));
            }
            let rows = run_scan(&grid, &setup, args.threads).map_err(Failure::Usage)?;
            Ok(Outcome::ok(match config.format {
                OutputFormat::Json => json(&ScanReport {
                    variant: args.variant,
                    j: args.j,
                    grid: &grid,
                    rows: &rows,
                }),
                OutputFormat::Csv => {
                    let quantity = grid.quantity.to_string();
                    csv_text(
                        &["p", "q", quantity.as_str()],
                        rows.iter().map(|r| {
                            let value = match (r.value, grid.quantity) {
                                (None, _) => "NaN".to_string(),
                                (Some(v), ScanQuantity::MinAbsFAtIntegers) => format_f64(v),
                                (Some(v), _) => (v as u64).to_string(),
                            };
                            vec![format_f64(r.p), format_f64(r.q), value]
                        }),
                    )
                }
            }))
        }
    }
}

/// Execute one configured command.
pub fn run(config: &RunConfig) -> Outcome {
    match dispatch(config) {
        Ok(outcome) => outcome,
        Err(Failure::Usage(msg)) => Outcome::fail(EXIT_USAGE, format!("error: {msg}")),
        Err(Failure::Lib(e)) => Outcome::fail(exit_code(&e), format!("error: {e}")),
    }
}

/// Parse `args` and run; argument errors map to exit code 1.
pub fn run_args<I, T>(args: I, env_tol: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::parse_from(args, env_tol) {
        Ok(config) => run(&config),
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}
