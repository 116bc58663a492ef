//! The `geocorr` command line.
//!
//! Subcommands: `detect`, `decompose`, `recompose`, `correlate`, `experiment`
//! and `sample`. Exit codes: 0 on success (or a converged detection), 1 on
//! usage and input errors, 2 when detection hits its iteration cap.

use std::error::Error as StdError;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::correlation::{correlate_linear, correlate_sampled, second_moment, CorrelationValue};
use crate::error::Error;
use crate::experiments::{run_campaign, CoefficientSpace, ExperimentReport, TrialSpec};
use crate::fields::{AnalyticField, Decomposition, LinearField, SampledField, SymmetricDomain};
use crate::registration::{detect, DetectorConfig, ExceptionRules, Status};

type CliResult<T> = std::result::Result<T, Box<dyn StdError>>;

#[derive(Debug, Parser)]
#[command(
    name = "geocorr",
    version,
    about = "Rotation registration of 2D linear vector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recover the total rotation between a field and its rotated pattern.
    Detect(DetectArgs),
    /// Split a field into saddle, source and vortex coefficients.
    Decompose(DecomposeArgs),
    /// Build a field from saddle, source and vortex coefficients.
    Recompose(RecomposeArgs),
    /// Correlate a pattern with a field at the origin.
    Correlate(CorrelateArgs),
    /// Run a seeded randomised detection campaign.
    Experiment(ExperimentArgs),
    /// Write grid samples of a field as CSV (hedgehog plot data).
    Sample(SampleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with = "format")]
    json: bool,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(Format::Human)
        }
    }
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Matrix coefficients `a11,a12,a21,a22`.
    #[arg(long, value_name = "A11,A12,A21,A22", allow_hyphen_values = true)]
    field: Option<String>,
    /// JSON field file: {"a11":..,"a12":..,"a21":..,"a22":..,"domain":{"kind":"square","l":1.0}}.
    #[arg(long, value_name = "PATH", conflicts_with = "field")]
    field_file: Option<PathBuf>,
    /// Domain for `--field`: `square[:l]` or `disk[:r]`.
    #[arg(
        long,
        value_name = "KIND[:SIZE]",
        default_value = "square:1",
        conflicts_with = "field_file"
    )]
    domain: String,
}

impl FieldArgs {
    fn load(&self) -> CliResult<LinearField> {
        match (&self.field, &self.field_file) {
            (Some(text), None) => {
                let [a11, a12, a21, a22] = parse_floats::<4>(text, "--field")?;
                Ok(LinearField::new(
                    a11,
                    a12,
                    a21,
                    a22,
                    parse_domain(&self.domain)?,
                )?)
            }
            (None, Some(path)) => read_field_file(path),
            _ => Err("exactly one of --field or --field-file is required".into()),
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
enum RulesArg {
    #[default]
    Symmetric,
    Literal,
}

impl From<RulesArg> for ExceptionRules {
    fn from(r: RulesArg) -> Self {
        match r {
            RulesArg::Symmetric => ExceptionRules::Symmetric,
            RulesArg::Literal => ExceptionRules::Literal,
        }
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Build the pattern by totally rotating the field by this angle (radians).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "pattern_file")]
    alpha: Option<f64>,
    /// JSON field file holding the rotated pattern.
    #[arg(long, value_name = "PATH")]
    pattern_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = RulesArg::Symmetric)]
    rules: RulesArg,
    /// Include the per-iteration trace.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize, Deserialize)]
struct DecompositionDoc {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    domain: SymmetricDomain,
}

#[derive(Debug, Args)]
struct RecomposeArgs {
    /// Coefficients `a,b,c,d`.
    #[arg(long, value_name = "A,B,C,D", allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// JSON as written by `decompose --json`.
    #[arg(long, value_name = "PATH", conflicts_with = "coeffs")]
    file: Option<PathBuf>,
    #[arg(
        long,
        value_name = "KIND[:SIZE]",
        default_value = "square:1",
        conflicts_with = "file"
    )]
    domain: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RotationKind {
    Total,
    Outer,
    Inner,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Pattern as matrix coefficients.
    #[arg(long, value_name = "A11,A12,A21,A22", allow_hyphen_values = true)]
    pattern: Option<String>,
    #[arg(long, value_name = "PATH", conflicts_with = "pattern")]
    pattern_file: Option<PathBuf>,
    /// Use the field rotated by this angle as the pattern.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["pattern", "pattern_file"])]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = RotationKind::Total, requires = "alpha")]
    rotation: RotationKind,
    /// Evaluate by midpoint quadrature on an N×N grid instead of the closed form.
    #[arg(long, value_name = "N")]
    quadrature: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    coeff_bound: f64,
    #[arg(long, value_enum, default_value_t = SpaceArg::Matrix)]
    space: SpaceArg,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Worker threads; results are identical for any value.
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Matrix,
    Decomposition,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    Counterexample,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Built-in non-linear field instead of `--field`.
    #[arg(long, value_enum, conflicts_with_all = ["field", "field_file"])]
    preset: Option<Preset>,
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Output CSV path; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the copy rotated by this angle.
    #[arg(long, allow_hyphen_values = true, requires = "rotated_out")]
    alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = RotationKind::Total)]
    rotation: RotationKind,
    #[arg(long, value_name = "PATH", requires = "alpha")]
    rotated_out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Detect(a) => cmd_detect(&a, out),
        Command::Decompose(a) => cmd_decompose(&a, out),
        Command::Recompose(a) => cmd_recompose(&a, out),
        Command::Correlate(a) => cmd_correlate(&a, out),
        Command::Experiment(a) => cmd_experiment(&a, out),
        Command::Sample(a) => cmd_sample(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn parse_floats<const N: usize>(text: &str, flag: &str) -> CliResult<[f64; N]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("{flag} expects {N} comma-separated numbers, got {:?}", text).into());
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse()
            .map_err(|_| format!("{flag}: cannot parse {p:?} as a number"))?;
    }
    Ok(out)
}

fn parse_domain(text: &str) -> CliResult<SymmetricDomain> {
    let (kind, size) = match text.split_once(':') {
        Some((k, s)) => (
            k,
            s.parse::<f64>()
                .map_err(|_| format!("--domain: bad size {s:?}"))?,
        ),
        None => (text, 1.0),
    };
    Ok(match kind {
        "square" => SymmetricDomain::square(size)?,
        "disk" => SymmetricDomain::disk(size)?,
        other => return Err(format!("--domain: unknown kind {other:?} (square or disk)").into()),
    })
}

fn read_field_file(path: &Path) -> CliResult<LinearField> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let f: LinearField =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(LinearField::from_matrix(f.matrix(), f.domain)?)
}

fn degrees(rad: f64) -> f64 {
    rad.to_degrees()
}

fn cmd_detect(a: &DetectArgs, out: &mut dyn Write) -> CliResult<i32> {
    let v = a.field.load()?;
    let u = match (a.alpha, &a.pattern_file) {
        (Some(alpha), None) => v.total_rotate(alpha),
        (None, Some(path)) => read_field_file(path)?,
        _ => return Err("exactly one of --alpha or --pattern-file is required".into()),
    };
    let cfg = DetectorConfig::new(a.eps)?
        .with_max_iter(a.max_iter)?
        .with_rules(a.rules.into());
    let r = detect(&v, &u, &cfg)?;
    match a.output.format() {
        Format::Json => {
            let mut doc = json!({
                "alpha": r.alpha,
                "iterations": r.iterations,
                "status": r.status,
                "corrected": r.corrected,
            });
            if a.trace {
                doc["trace"] = serde_json::to_value(&r.trace)?;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["iter", "measured_phi", "phi", "alpha", "branch"])?;
            for t in &r.trace {
                let branch = t.branch.map(|b| format!("{b:?}")).unwrap_or_default();
                w.write_record([
                    t.iter.to_string(),
                    t.measured_phi.to_string(),
                    t.phi.to_string(),
                    t.alpha.to_string(),
                    branch,
                ])?;
            }
            w.flush()?;
        }
        Format::Human => {
            writeln!(
                out,
                "alpha       {:.10} rad ({:.6} deg)",
                r.alpha,
                degrees(r.alpha)
            )?;
            writeln!(out, "status      {:?}", r.status)?;
            writeln!(out, "iterations  {}", r.iterations)?;
            let m = r.corrected.matrix();
            writeln!(
                out,
                "corrected   [[{}, {}], [{}, {}]]",
                m[0][0], m[0][1], m[1][0], m[1][1]
            )?;
            if a.trace {
                writeln!(
                    out,
                    "{:>6} {:>16} {:>16} {:>16}  branch",
                    "iter", "phi", "phi_deg", "alpha"
                )?;
                for t in &r.trace {
                    let branch = t.branch.map(|b| format!("{b:?}")).unwrap_or_default();
                    writeln!(
                        out,
                        "{:>6} {:>16.10} {:>16.6} {:>16.10}  {branch}",
                        t.iter,
                        t.phi,
                        degrees(t.phi),
                        t.alpha
                    )?;
                }
            }
        }
    }
    Ok(match r.status {
        Status::Converged => 0,
        Status::MaxIterExceeded => 2,
        Status::DegenerateZeroField => 1,
    })
}

fn cmd_decompose(a: &DecomposeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let v = a.field.load()?;
    let d = v.decompose();
    let moment = second_moment(v.domain);
    let (n1, n2) = (
        d.saddle_weight() * moment,
        d.source_vortex_weight() * moment,
    );
    match a.output.format() {
        Format::Json => {
            let doc = json!({
                "a": d.a, "b": d.b, "c": d.c, "d": d.d,
                "domain": v.domain,
                "saddle_norm_sq": n1,
                "source_vortex_norm_sq": n2,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "a,b,c,d,saddle_norm_sq,source_vortex_norm_sq")?;
            writeln!(out, "{},{},{},{},{},{}", d.a, d.b, d.c, d.d, n1, n2)?;
        }
        Format::Human => {
            writeln!(out, "saddle a   {}", d.a)?;
            writeln!(out, "saddle b   {}", d.b)?;
            writeln!(out, "source c   {}", d.c)?;
            writeln!(out, "vortex d   {}", d.d)?;
            writeln!(out, "|v1|^2     {n1}")?;
            writeln!(out, "|v2|^2     {n2}")?;
        }
    }
    Ok(0)
}

fn cmd_recompose(a: &RecomposeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (d, domain) = match (&a.coeffs, &a.file) {
        (Some(text), None) => {
            let [a_, b, c, d] = parse_floats::<4>(text, "--coeffs")?;
            (Decomposition { a: a_, b, c, d }, parse_domain(&a.domain)?)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let doc: DecompositionDoc = serde_json::from_str(&text)?;
            (
                Decomposition {
                    a: doc.a,
                    b: doc.b,
                    c: doc.c,
                    d: doc.d,
                },
                doc.domain.validate()?,
            )
        }
        _ => return Err("exactly one of --coeffs or --file is required".into()),
    };
    let f = d.recompose(domain)?;
    match a.output.format() {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&f)?)?,
        Format::Csv => {
            writeln!(out, "a11,a12,a21,a22")?;
            writeln!(out, "{},{},{},{}", f.a11, f.a12, f.a21, f.a22)?;
        }
        Format::Human => {
            writeln!(out, "[[{}, {}],", f.a11, f.a12)?;
            writeln!(out, " [{}, {}]]  on {}", f.a21, f.a22, f.domain)?;
        }
    }
    Ok(0)
}

fn cmd_correlate(a: &CorrelateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let v = a.field.load()?;
    let u = match (&a.pattern, &a.pattern_file, a.alpha) {
        (Some(text), None, None) => {
            let [a11, a12, a21, a22] = parse_floats::<4>(text, "--pattern")?;
            LinearField::new(a11, a12, a21, a22, v.domain)?
        }
        (None, Some(path), None) => read_field_file(path)?,
        (None, None, Some(alpha)) => match a.rotation {
            RotationKind::Total => v.total_rotate(alpha),
            RotationKind::Outer => v.outer_rotate(alpha),
            RotationKind::Inner => v.inner_rotate(alpha),
        },
        _ => return Err("exactly one of --pattern, --pattern-file or --alpha is required".into()),
    };
    let c: CorrelationValue = match a.quadrature {
        Some(n) => {
            let su = SampledField::sample(&u, n)?;
            let sv = SampledField::sample(&v, n)?;
            correlate_sampled(&su, &sv)?
        }
        None => correlate_linear(&u, &v)?,
    };
    let arg = c.argument().ok();
    match a.output.format() {
        Format::Json => {
            let doc = json!({ "value": c.value, "argument": arg, "magnitude": c.magnitude });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "s,e1,e2,e12,argument,magnitude")?;
            let arg = arg.map(|x| x.to_string()).unwrap_or_default();
            let m = c.value;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                m.s, m.x, m.y, m.b, arg, c.magnitude
            )?;
        }
        Format::Human => {
            writeln!(out, "value      {}", c.value)?;
            writeln!(out, "magnitude  {}", c.magnitude)?;
            match arg {
                Some(x) => writeln!(out, "argument   {x:.10} rad ({:.6} deg)", degrees(x))?,
                None => writeln!(out, "argument   undefined (zero correlation)")?,
            }
        }
    }
    Ok(0)
}

fn cmd_experiment(a: &ExperimentArgs, out: &mut dyn Write) -> CliResult<i32> {
    let mut spec = TrialSpec::new(a.trials, a.eps, a.seed);
    spec.coeff_bound = a.coeff_bound;
    spec.max_iter = a.max_iter;
    spec.threads = a.threads;
    spec.space = match a.space {
        SpaceArg::Matrix => CoefficientSpace::Matrix,
        SpaceArg::Decomposition => CoefficientSpace::Decomposition,
    };
    let format = match (a.output.json, a.output.format, &a.out) {
        (true, _, _) => Format::Json,
        (false, Some(f), _) => f,
        (false, None, Some(p)) if p.extension().is_some_and(|e| e == "csv") => Format::Csv,
        (false, None, Some(_)) => Format::Json,
        (false, None, None) => Format::Human,
    };
    if a.out.is_some() && format == Format::Human {
        return Err("--out needs --format json or csv".into());
    }
    let report = run_campaign(&spec)?;
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_report(&report, format, &mut w)?;
            w.flush()?;
        }
        None => write_report(&report, format, out)?,
    }
    Ok(0)
}

fn write_report(r: &ExperimentReport, format: Format, out: &mut dyn Write) -> CliResult<()> {
    match format {
        Format::Json => writeln!(out, "{}", r.to_json())?,
        Format::Csv => r.write_csv(out)?,
        Format::Human => {
            writeln!(out, "eps                  {}", r.eps)?;
            writeln!(out, "trials               {} (seed {})", r.trials, r.seed)?;
            writeln!(out, "average error        {:.6e}", r.avg_error)?;
            writeln!(out, "maximal error        {:.6e}", r.max_error)?;
            writeln!(out, "average iterations   {:.2}", r.avg_iterations)?;
            writeln!(out, "maximal iterations   {}", r.max_iterations)?;
            writeln!(out, "converged            {:.6}", r.converged_fraction)?;
            writeln!(
                out,
                "converged (regular)  {:.6}",
                r.converged_fraction_regular
            )?;
            writeln!(out, "near-degenerate      {}", r.near_degenerate_trials)?;
            writeln!(out, "degenerate           {}", r.degenerate_trials)?;
        }
    }
    Ok(())
}

fn write_samples(s: &SampledField, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            s.write_csv(BufWriter::new(file))?;
        }
        None => s.write_csv(out)?,
    }
    Ok(())
}

fn cmd_sample(a: &SampleArgs, out: &mut dyn Write) -> CliResult<i32> {
    if a.n < 2 {
        return Err(Error::InvalidParameter(format!("--n must be >= 2, got {}", a.n)).into());
    }
    let field = match a.preset {
        Some(Preset::Counterexample) => AnalyticField::counterexample(),
        None => AnalyticField::from_linear(a.field.load()?),
    };
    let samples = SampledField::sample(&field, a.n)?;
    write_samples(&samples, a.out.as_deref(), out)?;
    if let (Some(alpha), Some(path)) = (a.alpha, &a.rotated_out) {
        let rotated = match a.rotation {
            RotationKind::Total => field.total_rotate(alpha),
            RotationKind::Outer => field.outer_rotate(alpha),
            RotationKind::Inner => {
                // inner = total followed by undoing the value rotation
                field.total_rotate(alpha).outer_rotate(-alpha)
            }
        };
        write_samples(&SampledField::sample(&rotated, a.n)?, Some(path), out)?;
    }
    Ok(0)
}
