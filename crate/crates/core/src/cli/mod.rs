//! Command-line interface: single points, sweeps, plot tables and the verifier.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
//! Floats in CSV output carry 17 significant digits in plain decimal form.

pub mod verify;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::{report, CorrelationReport};
use crate::error::Error;
use crate::states::{overlap_from_omega, OverlapParam, PartitionSpec};

pub use verify::{run_suite, summary_table, CheckOutcome, Fault, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Column order of CSV output.
pub const CSV_COLUMNS: [&str; 12] = [
    "scheme",
    "n",
    "k",
    "s",
    "omega",
    "branch",
    "closest_param",
    "T2",
    "D2",
    "C2",
    "L2",
    "residual",
];

#[derive(Parser, Debug)]
#[command(
    name = "paircorr",
    version,
    about = "Pairwise correlations of n-qubit coherent-state superpositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report all measures at one overlap value.
    Point(PointArgs),
    /// Tabulate a scheme over an evenly spaced s grid.
    Sweep(SweepArgs),
    /// Emit one quantity of the traced pair for several n, one column per n.
    Plotdata(PlotArgs),
    /// Audit the closed forms against invariants and numerical search.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// k | n−k split of the full pure state.
    Pure,
    /// Two qubits with the rest traced out.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    #[value(name = "T2")]
    T2,
    #[value(name = "D2")]
    D2,
    #[value(name = "C2")]
    C2,
    #[value(name = "L2")]
    L2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    #[value(name = "r22-sign")]
    R22Sign,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Accepted for a uniform interface; closed forms use no randomness.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long, value_enum)]
    pub scheme: Scheme,
    #[arg(long)]
    pub n: u32,
    /// Size of the first block; required for the pure scheme only.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[command(flatten)]
    pub partition: PartitionArgs,
    /// Overlap s in [0, 1].
    #[arg(long, allow_negative_numbers = true, required_unless_present = "omega")]
    pub s: Option<f64>,
    /// ω in [0, 1], converted with s = 2ω − 1 (ω < 1/2 is reflected).
    #[arg(long, allow_negative_numbers = true, conflicts_with = "s")]
    pub omega: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_start: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s_end: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    /// Qubit counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Interior s-values in the oracle grid.
    #[arg(long, default_value_t = 9)]
    pub grid_density: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Upper bound applied to every check threshold.
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::VerificationFailed => EXIT_VERIFY_FAILED,
        }
    }
}

/// One output row; field names double as the JSON keys.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub scheme: &'static str,
    pub n: u32,
    pub k: Option<u32>,
    pub s: f64,
    pub omega: f64,
    pub branch: &'static str,
    pub closest_param: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "D2")]
    pub d2: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    pub residual: f64,
}

impl From<&CorrelationReport> for Row {
    fn from(r: &CorrelationReport) -> Self {
        Row {
            scheme: r.scheme_name(),
            n: r.partition.n(),
            k: r.partition.k(),
            s: r.s.value(),
            omega: r.s.omega(),
            branch: r.branch.as_str(),
            closest_param: r.closest_param.value,
            t2: r.t2,
            d2: r.d2,
            c2: r.c2,
            l2: r.l2,
            residual: r.residual,
        }
    }
}

impl Row {
    fn fields(&self) -> Vec<String> {
        vec![
            self.scheme.to_string(),
            self.n.to_string(),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            fmt17(self.s),
            fmt17(self.omega),
            self.branch.to_string(),
            fmt17(self.closest_param),
            fmt17(self.t2),
            fmt17(self.d2),
            fmt17(self.c2),
            fmt17(self.l2),
            fmt17(self.residual),
        ]
    }
}

/// Plain decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent after rounding to 17 digits, read from scientific form
    let sci = format!("{x:.16e}");
    let exponent: i32 = sci[sci.find('e').expect("exponent marker") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn partition(args: &PartitionArgs) -> Result<PartitionSpec, CliError> {
    match (args.scheme, args.k) {
        (Scheme::Pure, Some(k)) => Ok(PartitionSpec::pure(args.n, k)?),
        (Scheme::Pure, None) => Err(CliError::Usage(
            "--k is required for --scheme pure".to_string(),
        )),
        (Scheme::Mixed, None) => Ok(PartitionSpec::traced(args.n)?),
        (Scheme::Mixed, Some(_)) => Err(CliError::Usage(
            "--k must be omitted for --scheme mixed".to_string(),
        )),
    }
}

fn overlap(args: &PointArgs) -> Result<OverlapParam, CliError> {
    match (args.s, args.omega) {
        (Some(sv), _) => Ok(OverlapParam::new(sv)?),
        (None, Some(w)) => {
            let conv = overlap_from_omega(w)?;
            if conv.reflected {
                eprintln!("warning: omega = {w} < 1/2 reflected to {}", 1.0 - w);
            }
            Ok(conv.overlap)
        }
        (None, None) => Err(CliError::Usage(
            "one of --s or --omega is required".to_string(),
        )),
    }
}

/// Evenly spaced grid with both endpoints included.
pub fn sweep_grid(s_start: f64, s_end: f64, steps: usize) -> Result<Vec<OverlapParam>, CliError> {
    if !(0.0 <= s_start && s_start <= s_end && s_end <= 1.0) {
        return Err(CliError::Usage(format!(
            "need 0 <= s_start <= s_end <= 1, got s_start = {s_start}, s_end = {s_end}"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "--steps must be >= 2, got {steps}"
        )));
    }
    let width = s_end - s_start;
    (0..steps)
        .map(|i| {
            let v = if i == steps - 1 {
                s_end
            } else {
                s_start + i as f64 * width / (steps - 1) as f64
            };
            Ok(OverlapParam::new(v)?)
        })
        .collect()
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

fn rows_text(rows: &[Row], format: Format, single: bool) -> String {
    match format {
        Format::Csv => csv_text(
            &CSV_COLUMNS,
            &rows.iter().map(Row::fields).collect::<Vec<_>>(),
        ),
        Format::Json => {
            let text = if single {
                serde_json::to_string_pretty(&rows[0])
            } else {
                serde_json::to_string_pretty(rows)
            };
            text.expect("rows serialize") + "\n"
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let result = match out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|source| CliError::Io {
        path: out.map_or("stdout".to_string(), |p| p.display().to_string()),
        source,
    })
}

pub fn cmd_point(args: &PointArgs) -> Result<(), CliError> {
    let p = partition(&args.partition)?;
    let s = overlap(args)?;
    let row = Row::from(&report(p, s));
    emit(
        &rows_text(&[row], args.output.format, true),
        args.output.out.as_deref(),
    )
}

/// Rows of a sweep, in grid order.
pub fn sweep_rows(p: PartitionSpec, grid: &[OverlapParam]) -> Vec<Row> {
    grid.par_iter().map(|&s| Row::from(&report(p, s))).collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let p = partition(&args.partition)?;
    let grid = sweep_grid(args.s_start, args.s_end, args.steps)?;
    let rows = sweep_rows(p, &grid);
    emit(
        &rows_text(&rows, args.output.format, false),
        args.output.out.as_deref(),
    )
}

impl Quantity {
    pub fn figure(self) -> u8 {
        match self {
            Quantity::T2 => 1,
            Quantity::D2 => 2,
            Quantity::C2 => 3,
            Quantity::L2 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::T2 => "T2",
            Quantity::D2 => "D2",
            Quantity::C2 => "C2",
            Quantity::L2 => "L2",
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Quantity::T2 => "total correlation",
            Quantity::D2 => "geometric discord",
            Quantity::C2 => "classical correlation",
            Quantity::L2 => "additivity defect",
        }
    }

    pub fn of(self, r: &CorrelationReport) -> f64 {
        match self {
            Quantity::T2 => r.t2,
            Quantity::D2 => r.d2,
            Quantity::C2 => r.c2,
            Quantity::L2 => r.l2,
        }
    }
}

#[derive(Serialize)]
struct PlotJson<'a> {
    figure: u8,
    quantity: &'static str,
    n: &'a [u32],
    s: Vec<f64>,
    columns: Vec<Vec<f64>>,
}

/// s column followed by one column per n, traced-pair scheme.
pub fn plot_columns(
    quantity: Quantity,
    ns: &[u32],
    steps: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), CliError> {
    let grid = sweep_grid(0.0, 1.0, steps)?;
    let columns = ns
        .iter()
        .map(|&n| {
            let p = PartitionSpec::traced(n)?;
            Ok(grid
                .par_iter()
                .map(|&s| quantity.of(&report(p, s)))
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>, CliError>>()?;
    Ok((grid.iter().map(|s| s.value()).collect(), columns))
}

pub fn cmd_plotdata(args: &PlotArgs) -> Result<(), CliError> {
    let (s, columns) = plot_columns(args.quantity, &args.n, args.steps)?;
    let text = match args.output.format {
        Format::Csv => {
            let mut header = vec!["s".to_string()];
            header.extend(args.n.iter().map(|n| format!("n={n}")));
            let rows: Vec<Vec<String>> = s
                .iter()
                .enumerate()
                .map(|(i, &sv)| {
                    std::iter::once(fmt17(sv))
                        .chain(columns.iter().map(|c| fmt17(c[i])))
                        .collect()
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            format!(
                "# Figure {}: {} {} versus overlap s, two qubits traced from n\n{}",
                args.quantity.figure(),
                args.quantity.describe(),
                args.quantity.name(),
                csv_text(&header, &rows)
            )
        }
        Format::Json => {
            serde_json::to_string_pretty(&PlotJson {
                figure: args.quantity.figure(),
                quantity: args.quantity.name(),
                n: &args.n,
                s,
                columns,
            })
            .expect("plot data serializes")
                + "\n"
        }
    };
    emit(&text, args.output.out.as_deref())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let opts = VerifyOptions {
        grid_density: args.grid_density,
        seed: args.seed,
        tolerance: args.tolerance,
        fault: args.inject_fault.map(|f| match f {
            FaultArg::R22Sign => Fault::R22Sign,
        }),
    };
    if opts.grid_density == 0 {
        return Err(CliError::Usage("--grid-density must be >= 1".to_string()));
    }
    if opts.tolerance.is_some_and(|t| t.is_nan() || t < 0.0) {
        return Err(CliError::Usage("--tolerance must be >= 0".to_string()));
    }
    let outcomes = run_suite(&opts)?;
    print!("{}", summary_table(&outcomes));
    match outcomes.iter().find(|o| !o.passed()) {
        None => Ok(()),
        Some(o) => {
            let case = o.first_failure().expect("failed check has a failing case");
            println!(
                "first failure: {} ({}): error {:e} > threshold {:e}",
                o.name, case.label, case.error, case.threshold
            );
            Err(CliError::VerificationFailed)
        }
    }
}

/// Parses `args` and runs the chosen subcommand, returning the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Point(a) => cmd_point(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Plotdata(a) => cmd_plotdata(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::VerificationFailed) => EXIT_VERIFY_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_round_trips() {
        for x in [
            0.25,
            1.0,
            0.1,
            1.0 / 3.0,
            -2.7755575615628914e-17,
            0.747406,
            123456.789,
            9.999999999999999e-5,
            1e-3,
            f64::MIN_POSITIVE,
        ] {
            let t = fmt17(x);
            assert!(!t.contains('e'), "{t}");
            assert_eq!(t.parse::<f64>().unwrap(), x, "{t}");
        }
        assert_eq!(fmt17(0.0), "0");
        assert_eq!(fmt17(-0.0), "0");
        assert_eq!(fmt17(0.5), "0.50000000000000000");
        assert_eq!(fmt17(1.0), "1.0000000000000000");
    }

    #[test]
    fn fmt17_has_seventeen_significant_digits() {
        for x in [0.123, 3.5, 42.0, 1e-7, 0.001, 0.01] {
            let t = fmt17(x);
            let sig = t
                .bytes()
                .filter(u8::is_ascii_digit)
                .skip_while(|&b| b == b'0')
                .count();
            assert_eq!(sig, 17, "{t}");
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = sweep_grid(0.0, 1.0, 3).unwrap();
        let v: Vec<f64> = g.iter().map(|s| s.value()).collect();
        assert_eq!(v, vec![0.0, 0.5, 1.0]);
        let g = sweep_grid(0.1, 0.7, 7).unwrap();
        assert_eq!(g.last().unwrap().value(), 0.7);
    }

    #[test]
    fn grid_validation() {
        assert!(sweep_grid(0.5, 0.2, 3).is_err());
        assert!(sweep_grid(-0.1, 0.2, 3).is_err());
        assert!(sweep_grid(0.0, 1.2, 3).is_err());
        assert!(sweep_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn partition_requires_k_iff_pure() {
        let args = |scheme, k| PartitionArgs { scheme, n: 3, k };
        assert!(partition(&args(Scheme::Pure, Some(1))).is_ok());
        assert!(matches!(
            partition(&args(Scheme::Pure, None)),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            partition(&args(Scheme::Mixed, Some(1))),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            partition(&args(Scheme::Pure, Some(3))),
            Err(CliError::Invalid(Error::InvalidPartition(_)))
        ));
    }

    #[test]
    fn csv_header_and_line_endings() {
        let rows = sweep_rows(
            PartitionSpec::traced(3).unwrap(),
            &sweep_grid(0.0, 1.0, 3).unwrap(),
        );
        let text = rows_text(&rows, Format::Csv, false);
        assert!(!text.contains('\r'));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(lines
            .next()
            .unwrap()
            .starts_with("mixed,3,,0,0.50000000000000000,plus,"));
        assert_eq!(text.lines().count(), 4);
    }
}
