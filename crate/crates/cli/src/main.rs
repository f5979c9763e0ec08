//! `divform`: generate sequences, check dividing formulas, and cross-check
//! the three ways of counting periodic points of `g_j`.

mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divform_core::expr::parse_sequence;
use divform_core::interval_map::parse_map;
use divform_core::report::{self, Cell, CrossCheckReport, DivisibilityReport, Mode};
use divform_core::{build_gj, Equation, Error, IntervalMap, PieceCap, Sequence};
use serde_json::json;

use output::{Field, Format, Table};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "divform",
    version,
    about = "Dividing formulas n | Q(n) from periodic-point counts"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Largest n to compute (each command has its own default).
    #[arg(long, global = true)]
    n_max: Option<u64>,

    /// Maximum number of linear pieces in any map iterate.
    #[arg(long, global = true, default_value_t = PieceCap::DEFAULT.0)]
    piece_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SequenceArgs {
    /// A generator name (`theorem4`, `theorem5-phi`, `theorem5-psi`) used with
    /// --j/--k/--m, or an expression such as `lin(3,theorem5phi(2),-1,const(2))`.
    spec: String,

    #[arg(long)]
    j: Option<u32>,

    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    k: i64,

    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    m: i64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "phi1-mod-n")]
    Phi1ModN,
    #[value(name = "phi2-mod-2n")]
    Phi2Mod2N,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EquationArg {
    Fixed,
    Antifixed,
}

#[derive(Subcommand)]
enum Command {
    /// Print the values n = 1..n_max of a sequence.
    Seq(SequenceArgs),
    /// Check n | phi1(Q, n) or 2n | phi2(Q, n) row by row.
    Verify {
        #[command(flatten)]
        seq: SequenceArgs,
        /// Defaults to phi2-mod-2n for antifixed-point counts, phi1-mod-n otherwise.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Count solutions of f^n(x) = x or g^n(x) = -x by exact iteration.
    Oracle {
        #[arg(
            long,
            conflicts_with = "map_file",
            required_unless_present = "map_file"
        )]
        j: Option<u32>,
        #[arg(long)]
        map_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "fixed")]
        equation: EquationArg,
    },
    /// Compare recurrence, map oracle, and symbolic engine for g_j.
    Crosscheck {
        #[arg(long)]
        j: u32,
    },
    /// Scan n | phi1(psi_j, n), an open question; failures are reported, not fatal.
    Conjecture {
        #[arg(long)]
        j: u32,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PieceCapExceeded { .. } | Error::WordCapExceeded { .. } => {
                Failure::Resource(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn resolve(args: &SequenceArgs) -> Result<Sequence, Failure> {
    let need_j = || {
        args.j
            .ok_or_else(|| Failure::Usage(format!("`{}` requires --j", args.spec)))
    };
    let seq = match args.spec.as_str() {
        "theorem4" => Sequence::theorem4(need_j()?, args.k, args.m)?,
        "theorem5-phi" => Sequence::theorem5_phi(need_j()?)?,
        "theorem5-psi" => Sequence::theorem5_psi(need_j()?)?,
        expr => parse_sequence(expr)?,
    };
    Ok(seq)
}

fn usage_n_max(n_max: u64) -> Result<u64, Failure> {
    if n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    Ok(n_max)
}

fn cmd_seq(cli: &Cli, args: &SequenceArgs, out: &mut impl Write) -> CmdResult {
    let n_max = usage_n_max(cli.n_max.unwrap_or(20))?;
    let seq = resolve(args)?;
    let mut table = Table::new("seq", vec!["n", "value"])
        .param("sequence", seq.id())
        .param("kind", seq.kind().name())
        .param("n_max", n_max);
    for (n, v) in (1..).zip(seq.values(n_max)?) {
        table.rows.push(vec![Field::int(n), Field::int(v)]);
    }
    table.write(cli.format, out)?;
    Ok(())
}

fn report_table(command: &'static str, report: &DivisibilityReport, n_max: u64) -> Table {
    let s = report.summary();
    let mut table = Table::new(
        command,
        vec!["n", "q", "phi", "modulus", "remainder", "pass"],
    )
    .param("sequence", &report.sequence_id)
    .param("mode", report.mode)
    .param("guarantees", report.guarantees)
    .param("n_max", n_max);
    let opt = |v: &Option<num_bigint::BigInt>| v.as_ref().map_or(Field::Null, Field::int);
    for row in &report.rows {
        table.rows.push(vec![
            Field::int(row.n),
            opt(&row.q),
            opt(&row.phi),
            Field::int(row.modulus),
            opt(&row.remainder),
            Field::Bool(row.pass),
        ]);
    }
    let errors: Vec<_> = report
        .rows
        .iter()
        .filter_map(|r| {
            r.error
                .as_ref()
                .map(|e| json!({"n": r.n.to_string(), "error": e.to_string()}))
        })
        .collect();
    table.extra.push((
        "summary",
        json!({
            "checked": s.checked.to_string(),
            "failures": s.failures.to_string(),
            "first_failure": s.first_failure.map(|n| n.to_string()),
        }),
    ));
    if !errors.is_empty() {
        table.extra.push(("errors", json!(errors)));
    }
    table
}

fn print_row_errors(report: &DivisibilityReport) {
    for row in &report.rows {
        if let Some(e) = &row.error {
            eprintln!("n = {}: {e}", row.n);
        }
    }
}

fn cmd_verify(
    cli: &Cli,
    args: &SequenceArgs,
    mode: Option<ModeArg>,
    out: &mut impl Write,
) -> CmdResult {
    let n_max = usage_n_max(cli.n_max.unwrap_or(48))?;
    let seq = resolve(args)?;
    let mode = match mode {
        Some(ModeArg::Phi1ModN) => Mode::Phi1ModN,
        Some(ModeArg::Phi2Mod2N) => Mode::Phi2Mod2N,
        None => Mode::for_sequence(&seq),
    };
    let report = report::verify(&seq, mode, n_max);
    report_table("verify", &report, n_max).write(cli.format, out)?;
    print_row_errors(&report);
    let s = report.summary();
    match s.first_failure {
        None => {
            eprintln!("{} ({mode}): {} checked, 0 failures", seq.id(), s.checked);
            Ok(())
        }
        Some(first) => {
            eprintln!(
                "{} ({mode}): {} checked, {} failures, first at n = {first}",
                seq.id(),
                s.checked,
                s.failures
            );
            Err(Failure::Check)
        }
    }
}

fn cmd_oracle(
    cli: &Cli,
    j: Option<u32>,
    map_file: Option<&PathBuf>,
    equation: EquationArg,
    out: &mut impl Write,
) -> CmdResult {
    let n_max = usage_n_max(cli.n_max.unwrap_or(10))?;
    let (map, source): (IntervalMap, String) = match (j, map_file) {
        (Some(j), _) => (build_gj(j)?, format!("g_{j}")),
        (None, Some(path)) => (
            parse_map(&std::fs::read_to_string(path)?)?,
            path.display().to_string(),
        ),
        (None, None) => {
            return Err(Failure::Usage(
                "either --j or --map-file is required".into(),
            ))
        }
    };
    let equation = match equation {
        EquationArg::Fixed => Equation::Fixed,
        EquationArg::Antifixed => Equation::Antifixed,
    };
    let cap = PieceCap(cli.piece_cap);
    let mut table = Table::new("oracle", vec!["n", "value"])
        .param("map", source)
        .param(
            "equation",
            if equation == Equation::Fixed {
                "fixed"
            } else {
                "antifixed"
            },
        )
        .param("n_max", n_max)
        .param("piece_cap", cli.piece_cap);
    let mut failure = None;
    for (n, iterate) in (1..=n_max).zip(map.iterates(cap)) {
        match iterate.and_then(|m| m.count_solutions(equation)) {
            Ok(c) => table.rows.push(vec![Field::int(n), Field::int(c)]),
            Err(e) => {
                failure = Some((n, e));
                break;
            }
        }
    }
    table.write(cli.format, out)?;
    match failure {
        None => Ok(()),
        Some((n, e)) => {
            eprintln!("stopped at n = {n}: {e}");
            Err(e.into())
        }
    }
}

fn crosscheck_table(report: &CrossCheckReport, n_max: u64) -> Table {
    let header = vec![
        "n",
        "phi_recurrence",
        "phi_oracle",
        "phi_symbolic",
        "psi_recurrence",
        "psi_oracle",
        "psi_symbolic",
        "agree",
    ];
    let mut table = Table::new("crosscheck", header)
        .param("j", report.j)
        .param("n_max", n_max);
    let cell = |c: &Cell| match c {
        Cell::Value(v) => Field::int(v),
        other => Field::Text(other.to_string()),
    };
    for row in &report.rows {
        let mut fields = vec![Field::int(row.n)];
        fields.extend(row.fixed.cells().into_iter().map(cell));
        fields.extend(row.antifixed.cells().into_iter().map(cell));
        fields.push(Field::Bool(row.agree()));
        table.rows.push(fields);
    }
    table
}

fn cmd_crosscheck(cli: &Cli, j: u32, out: &mut impl Write) -> CmdResult {
    let n_max = usage_n_max(cli.n_max.unwrap_or(8))?;
    if j < 2 {
        return Err(Failure::Usage(format!(
            "crosscheck requires j >= 2, got {j}"
        )));
    }
    let report = report::crosscheck(j, n_max, PieceCap(cli.piece_cap));
    crosscheck_table(&report, n_max).write(cli.format, out)?;
    if let Some(e) = report.first_error() {
        eprintln!("error: {e}");
        return Err(e.clone().into());
    }
    if report.all_agree() {
        eprintln!("j = {j}: all {n_max} rows agree");
        Ok(())
    } else {
        let bad: Vec<String> = report
            .rows
            .iter()
            .filter(|r| !r.agree())
            .map(|r| r.n.to_string())
            .collect();
        eprintln!("j = {j}: disagreement at n = {}", bad.join(", "));
        Err(Failure::Check)
    }
}

fn cmd_conjecture(cli: &Cli, j: u32, out: &mut impl Write) -> CmdResult {
    let n_max = usage_n_max(cli.n_max.unwrap_or(36))?;
    let seq = Sequence::theorem5_psi(j)?;
    let report = report::verify(&seq, Mode::Phi1OfPsi, n_max);
    report_table("conjecture", &report, n_max).write(cli.format, out)?;
    print_row_errors(&report);
    if report.rows.iter().any(|r| r.error.is_some()) {
        return Err(Failure::Check);
    }
    let counterexamples: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.n.to_string())
        .collect();
    if counterexamples.is_empty() {
        eprintln!("{}: no counterexamples for n <= {n_max}", seq.id());
    } else {
        eprintln!(
            "{}: counterexamples at n = {}",
            seq.id(),
            counterexamples.join(", ")
        );
    }
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::Seq(args) => cmd_seq(cli, args, &mut out),
        Command::Verify { seq, mode } => cmd_verify(cli, seq, *mode, &mut out),
        Command::Oracle {
            j,
            map_file,
            equation,
        } => cmd_oracle(cli, *j, map_file.as_ref(), *equation, &mut out),
        Command::Crosscheck { j } => cmd_crosscheck(cli, *j, &mut out),
        Command::Conjecture { j } => cmd_conjecture(cli, *j, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(EXIT_FAILURE),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
