//! `frobenius`: exact Frobenius numbers, bound comparisons and the Monte
//! Carlo tightness study from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use frobenius::analysis::{self, Condition9, EnumerationOptions};
use frobenius::bounds::{self, BoundKind};
use frobenius::dedekind::{self, DedekindParams, UnityRoots};
use frobenius::emit::{self, CsvSink, JsonSink, ScatterOptions};
use frobenius::exact;
use frobenius::montecarlo::{self, Aggregator, Axis, SimulationConfig, TrendCollector};
use frobenius::{Error, Instance, Triple};

/// Environment variable naming the directory `simulate` writes to when
/// `--out` is not given.
const OUT_DIR_VAR: &str = "FROBENIUS_OUT_DIR";

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "frobenius",
    version,
    about = "Frobenius numbers and Beck-style bounds"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Frobenius number of a primitive vector.
    Frobenius {
        #[arg(required = true, num_args = 2.., allow_negative_numbers = true)]
        entries: Vec<i64>,
    },
    /// Evaluate upper and lower bounds.
    Bounds {
        #[arg(required = true, num_args = 2.., allow_negative_numbers = true)]
        entries: Vec<i64>,
        /// Which bound to show.
        #[arg(long, default_value = "all")]
        kind: String,
    },
    /// Compare the corrected (UB1) and original (UB2) bounds on a triple.
    Compare {
        #[arg(num_args = 3, required = true, allow_negative_numbers = true)]
        entries: Vec<i64>,
        /// Also compute the exact Frobenius number.
        #[arg(long)]
        exact: bool,
    },
    /// List the triples on which UB2 is no worse than UB1.
    Exceptions {
        /// Include triples with repeated entries, i.e. the (1,1,k) family.
        #[arg(long)]
        allow_repeats: bool,
        /// Largest k listed for (1,1,k) when repeats are allowed.
        #[arg(long, default_value_t = 100)]
        repeat_cap: u64,
    },
    /// Re-check the published counterexamples and golden values.
    Verify,
    /// Fourier-Dedekind sum sigma_t(a, b; c) by both evaluation routes.
    Dedekind {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        c: u64,
        #[arg(allow_negative_numbers = true)]
        t: i64,
    },
    /// Seeded Monte Carlo comparison of UB1 and UB2.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = montecarlo::DEFAULT_ITERATIONS)]
    iters: u64,
    /// Largest entry drawn.
    #[arg(long, default_value_t = montecarlo::DEFAULT_MAX_ENTRY)]
    max_norm: u64,
    /// Entries drawn per sample; the three smallest are compared.
    #[arg(long, default_value_t = 3)]
    dimension: usize,
    /// Attach exact Frobenius numbers (max-norm at most 2000).
    #[arg(long)]
    exact: bool,
    /// Grouping key for aggregates and the scatter x axis.
    #[arg(long, value_enum, default_value_t = AxisArg::A3)]
    axis: AxisArg,
    /// Emit per-bucket aggregates instead of records.
    #[arg(long)]
    aggregate: bool,
    #[arg(long, default_value_t = 1)]
    bucket_width: u64,
    /// Output file; `-` for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Logarithmic x axis for svg-scatter.
    #[arg(long)]
    log_x: bool,
    /// Downsample svg-scatter to at most this many points.
    #[arg(long)]
    max_points: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    A3,
    Prod12,
    Prod123,
    Sum,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::A3 => Axis::A3,
            AxisArg::Prod12 => Axis::Prod12,
            AxisArg::Prod123 => Axis::Prod123,
            AxisArg::Sum => Axis::Sum,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    SvgScatter,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::SvgScatter => "svg",
            Format::Text => "txt",
        }
    }
}

enum Failure {
    Lib(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type Outcome = std::result::Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Config(_) => EXIT_USAGE,
        Error::Io(_) | Error::Sink { .. } => EXIT_IO,
        Error::Verification(_) => EXIT_VERIFICATION,
        _ => EXIT_DOMAIN,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFICATION),
        Err(Failure::Lib(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn is_broken_pipe(e: &Error) -> bool {
    matches!(e, Error::Io(io) if io.kind() == io::ErrorKind::BrokenPipe)
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Frobenius { entries } => cmd_frobenius(&entries, json, out),
        Command::Bounds { entries, kind } => cmd_bounds(&entries, &kind, json, out),
        Command::Compare { entries, exact } => cmd_compare(&entries, exact, json, out),
        Command::Exceptions {
            allow_repeats,
            repeat_cap,
        } => cmd_exceptions(allow_repeats, repeat_cap, json, out),
        Command::Verify => cmd_verify(json, out),
        Command::Dedekind { a, b, c, t } => cmd_dedekind(a, b, c, t, json, out),
        Command::Simulate(args) => cmd_simulate(args, out),
    }
}

fn print_json(out: &mut impl Write, value: &serde_json::Value) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_frobenius(entries: &[i64], json: bool, out: &mut impl Write) -> Outcome {
    let a = Instance::validate(entries)?;
    let f = exact::frobenius_exact(&a)?;
    if json {
        print_json(out, &json!({ "entries": a.entries(), "frobenius": f }))
    } else {
        writeln!(out, "{f}")?;
        Ok(())
    }
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.6}"))
}

fn cmd_bounds(entries: &[i64], kind: &str, json: bool, out: &mut impl Write) -> Outcome {
    let a = Instance::validate(entries)?;
    let results = if kind == "all" {
        bounds::all_bounds(&a)?
    } else {
        vec![bounds::evaluate(&a, kind.parse::<BoundKind>()?)?]
    };
    if json {
        return print_json(out, &json!({ "entries": a.entries(), "bounds": results }));
    }
    for r in &results {
        let side = if r.kind.is_upper() { "upper" } else { "lower" };
        write!(
            out,
            "{:<9} {side}  {:>16}",
            r.kind.short_name(),
            fmt_value(r.value)
        )?;
        match &r.reason {
            Some(reason) => writeln!(out, "  not applicable: {reason}")?,
            None => writeln!(out)?,
        }
        if let Some(caveat) = r.caveat {
            writeln!(out, "          note: {caveat}")?;
        }
    }
    Ok(())
}

fn cmd_compare(entries: &[i64], with_exact: bool, json: bool, out: &mut impl Write) -> Outcome {
    let a = Instance::validate(entries)?;
    let t = a.leading_triple().expect("three entries");
    let ub1 = bounds::ub_beck_corrected(&a)?;
    let ub2 = bounds::ub_beck_original(&a)?;
    let condition = Condition9::of(&t);
    let gap = bounds::ub_gap(&t)?;
    let f = if with_exact {
        Some(exact::frobenius_exact(&a)?)
    } else {
        None
    };
    if !ub2.applicable {
        eprintln!(
            "warning: bounds not applicable to {a}: {}; raw values shown",
            ub2.reason.as_deref().unwrap_or("")
        );
    }
    if json {
        return print_json(
            out,
            &json!({
                "triple": t,
                "applicable": ub2.applicable,
                "reason": ub2.reason,
                "ub1": ub1.value,
                "ub2": ub2.value,
                "gap": gap,
                "ub2_not_worse": condition.holds(),
                "tie": condition.is_tie(),
                "lhs": condition.lhs.to_string(),
                "rhs": condition.rhs.to_string(),
                "frobenius": f,
            }),
        );
    }
    writeln!(out, "UB1 {}", fmt_value(ub1.value))?;
    writeln!(out, "UB2 {}", fmt_value(ub2.value))?;
    writeln!(
        out,
        "gap {gap:.6}  (UB2 - UB1, positive when UB1 is tighter)"
    )?;
    let verdict = if condition.is_tie() {
        "UB2 = UB1"
    } else if condition.holds() {
        "UB2 sharper"
    } else {
        "UB1 sharper"
    };
    let relation = if condition.holds() { "<=" } else { ">" };
    writeln!(
        out,
        "{verdict}: a1a2a3(a1+a2+a3) = {} {relation} a1^2+a2^2+a3^2+10(a1a2+a2a3+a1a3) = {}",
        condition.lhs, condition.rhs
    )?;
    if let Some(f) = f {
        writeln!(out, "F {f}")?;
    }
    Ok(())
}

fn cmd_exceptions(
    allow_repeats: bool,
    repeat_cap: u64,
    json: bool,
    out: &mut impl Write,
) -> Outcome {
    let found = analysis::enumerate_exceptional(EnumerationOptions {
        allow_repeats,
        repeat_cap,
    });
    let triples: Vec<Triple> = found.iter().map(|e| e.triple).collect();
    let diff = analysis::compare_with_published(&triples);
    for e in found.iter().filter(|e| e.tie) {
        eprintln!("note: {} is an exact tie (UB1 = UB2)", e.triple);
    }
    if !diff.is_empty() {
        for (t, c) in &diff.missing {
            eprintln!(
                "note: published {t} not found (lhs {}, rhs {})",
                c.lhs, c.rhs
            );
        }
        for (t, c) in &diff.extra {
            eprintln!(
                "note: {t} not in the published list (lhs {}, rhs {})",
                c.lhs, c.rhs
            );
        }
    }
    if json {
        let rows: Vec<_> = found
            .iter()
            .map(|e| {
                json!({
                    "triple": e.triple,
                    "lhs": e.condition.lhs.to_string(),
                    "rhs": e.condition.rhs.to_string(),
                    "tie": e.tie,
                })
            })
            .collect();
        return print_json(out, &json!(rows));
    }
    for t in triples {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

fn cmd_verify(json: bool, out: &mut impl Write) -> Outcome {
    let report = analysis::verify_all()?;
    if json {
        print_json(
            out,
            &json!({ "passed": report.passed(), "checks": report.checks }),
        )?;
    } else {
        for c in &report.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: {}", c.name, c.detail)?;
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_dedekind(a: i64, b: i64, c: u64, t: i64, json: bool, out: &mut impl Write) -> Outcome {
    DedekindParams::new(vec![a, b], c, t)?;
    let roots = UnityRoots::new(c)?;
    let check = dedekind::check_conventions(&roots, a, b, t)?;
    let lower = dedekind::sigma_lower_bound(c);
    let tol = 1e-9;
    let agree = check.literal_error() < tol;
    if json {
        return print_json(
            out,
            &json!({
                "a": a, "b": b, "c": c, "t": t,
                "roots_of_unity": check.roots_of_unity,
                "sawtooth": check.literal,
                "sawtooth_zero_at_integers": check.conventional,
                "agree": agree,
                "lower_bound": lower,
            }),
        );
    }
    writeln!(out, "roots of unity  {:.12}", check.roots_of_unity)?;
    writeln!(out, "sawtooth        {:.12}", check.literal)?;
    writeln!(out, "agreement       {}", if agree { "yes" } else { "no" })?;
    writeln!(
        out,
        "sawtooth with ((n)) = 0 at integers: {:.12} (differs by {:.3e})",
        check.conventional,
        check.conventional_error()
    )?;
    writeln!(out, "lower bound     {lower:.12}")?;
    Ok(())
}

fn output_path(args: &SimulateArgs) -> Option<PathBuf> {
    match &args.out {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUT_DIR_VAR).map(|dir| {
            let kind = if args.aggregate {
                "aggregate"
            } else {
                "records"
            };
            Path::new(&dir).join(format!(
                "simulate-{}-{kind}.{}",
                args.seed,
                args.format.extension()
            ))
        }),
    }
}

fn cmd_simulate(args: SimulateArgs, stdout: &mut impl Write) -> Outcome {
    let config = SimulationConfig {
        seed: args.seed,
        iterations: args.iters,
        dimension: args.dimension,
        max_entry: args.max_norm,
        compute_exact: args.exact,
    };
    config.validate()?;
    if args.aggregate && args.format == Format::SvgScatter {
        return Err(Error::Usage("svg-scatter plots records; drop --aggregate".into()).into());
    }
    let axis = Axis::from(args.axis);
    let mut aggregator = Aggregator::new(axis, args.bucket_width)?;

    let mut file;
    let out: &mut dyn Write = match output_path(&args) {
        Some(path) => {
            file = BufWriter::new(File::create(&path).map_err(|e| {
                Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
            })?);
            &mut file
        }
        None => stdout,
    };

    match (args.format, args.aggregate) {
        (Format::Csv, false) => {
            montecarlo::run_simulation(&config, CsvSink::new(&mut *out))?;
        }
        (Format::Json, false) => {
            montecarlo::run_simulation(&config, JsonSink::new(&mut *out))?;
        }
        (Format::SvgScatter, _) => {
            let records = montecarlo::simulate_records(&config)?;
            let opts = ScatterOptions {
                axis,
                log_x: args.log_x,
                max_points: args.max_points,
            };
            out.write_all(emit::scatter_svg(&records, &opts).as_bytes())?;
        }
        (Format::Csv, true) => {
            montecarlo::run_simulation(&config, &mut aggregator)?;
            emit::write_aggregate_csv(&mut *out, &aggregator.rows())?;
        }
        (Format::Json, true) => {
            montecarlo::run_simulation(&config, &mut aggregator)?;
            emit::write_aggregate_json(&mut *out, &aggregator.rows())?;
        }
        (Format::Text, _) => {
            let mut trends = TrendCollector::default();
            montecarlo::run_simulation(&config, &mut trends)?;
            write_trend_text(&mut *out, &trends)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn write_trend_text(out: &mut dyn Write, trends: &TrendCollector) -> io::Result<()> {
    let r = trends.report();
    let a = &r.audit;
    writeln!(out, "records                          {}", r.records)?;
    writeln!(out, "UB2 sharper, published triple    {}", a.listed)?;
    writeln!(
        out,
        "UB2 sharper, (1,1,k)             {}",
        a.repeated_ones.len()
    )?;
    writeln!(
        out,
        "UB2 sharper, unexplained         {}",
        a.unexplained.len()
    )?;
    for t in &a.unexplained {
        writeln!(out, "  {t}")?;
    }
    writeln!(
        out,
        "exact F above a bound            {}",
        a.bound_violations.len()
    )?;
    writeln!(
        out,
        "rank correlation a3 vs mean gap  {:.4}",
        r.a3_rank_correlation
    )?;
    writeln!(
        out,
        "min-gap dips over a1a2 buckets   {}/{}",
        r.prod12_min_inversions, r.prod12_bucket_pairs
    )?;
    writeln!(
        out,
        "mean gap variance by sum         <= {}: {:.3}  > {}: {:.3}",
        montecarlo::SUM_VARIANCE_SPLIT,
        r.sum_variance_low,
        montecarlo::SUM_VARIANCE_SPLIT,
        r.sum_variance_high
    )
}
