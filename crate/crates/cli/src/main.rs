use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rep2d::families::{self, FamilyKind, FamilySpec, TandemLabels};
use rep2d::formulas::PredictedCounts;
use rep2d::grid::{load_grid, save_grid, Grid2D, GridFormat, HashKey};
use rep2d::repetitions::{self, naive, naive::OracleCap};
use rep2d::verify::verify_witnesses;

/// Grids above this many cells are not fully counted by `verify` and
/// `report` unless the limit is raised.
const DEFAULT_MEASURE_CAP: usize = 17_000;

#[derive(Parser)]
#[command(
    name = "rep2d",
    version,
    about = "Extremal 2D-string families and repetition counters"
)]
struct Cli {
    /// Pin the fingerprint key so runs are reproducible.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fast,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Pbm,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Labels {
    Literal,
    Widened,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Repetition {
    Tandems,
    Quartics,
    Runs,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family grid.
    Generate {
        kind: FamilyKind,
        level: u32,
        /// text or pbm; defaults to pbm for binary grids, text otherwise.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output path; standard output when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also write the witness rectangles to this path.
        #[arg(long)]
        witnesses: Option<PathBuf>,
        /// Row labels for the tandem family.
        #[arg(long, value_enum, default_value = "literal")]
        labels: Labels,
    },
    /// Count repetitions of a grid file, or of a family given as `kind:level`.
    Count {
        what: Repetition,
        grid: String,
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
        /// Oracle size cap in cells.
        #[arg(long)]
        cap: Option<usize>,
        /// json (default) or text.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Generate a family, check its witnesses and predicted counts.
    Verify {
        kind: FamilyKind,
        level: u32,
        #[arg(long, value_enum, default_value = "fast")]
        mode: Mode,
        #[arg(long)]
        cap: Option<usize>,
        /// Largest grid (in cells) that is fully counted.
        #[arg(long, default_value_t = DEFAULT_MEASURE_CAP)]
        measure_cap: usize,
        /// Skip the full count even when under the measure cap.
        #[arg(long)]
        no_count: bool,
    },
    /// Predicted and measured counts over a range of levels, as CSV.
    Report {
        kind: FamilyKind,
        #[arg(long, default_value_t = 1)]
        from: u32,
        #[arg(long, default_value_t = 6)]
        to: u32,
        /// Fill the measured column where the grid is under the measure cap.
        #[arg(long)]
        measure: bool,
        #[arg(long, default_value_t = DEFAULT_MEASURE_CAP)]
        measure_cap: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(seed) = cli.seed {
        HashKey::install_global(seed);
    }
    let result = match cli.command {
        Command::Generate {
            kind,
            level,
            format,
            out,
            witnesses,
            labels,
        } => generate(
            kind,
            level,
            format,
            out.as_deref(),
            witnesses.as_deref(),
            labels,
        ),
        Command::Count {
            what,
            grid,
            mode,
            cap,
            format,
        } => count(what, &grid, mode, cap, format),
        Command::Verify {
            kind,
            level,
            mode,
            cap,
            measure_cap,
            no_count,
        } => verify(
            kind,
            level,
            mode,
            cap,
            if no_count { 0 } else { measure_cap },
        ),
        Command::Report {
            kind,
            from,
            to,
            measure,
            measure_cap,
        } => report(kind, from, to, if measure { measure_cap } else { 0 }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rep2d: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn grid_format(format: Option<Format>, grid: &Grid2D) -> Result<GridFormat, Failure> {
    match format {
        None if grid.is_binary() => Ok(GridFormat::Pbm),
        None | Some(Format::Text) => Ok(GridFormat::Text),
        Some(Format::Pbm) => Ok(GridFormat::Pbm),
        Some(_) => Err(usage("grids are written as text or pbm")),
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, bytes).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(usage)
        }
    }
}

fn generate(
    kind: FamilyKind,
    level: u32,
    format: Option<Format>,
    out: Option<&Path>,
    witness_path: Option<&Path>,
    labels: Labels,
) -> Result<u8, Failure> {
    let labels = match labels {
        Labels::Literal => TandemLabels::Literal,
        Labels::Widened => TandemLabels::Widened,
    };
    if labels == TandemLabels::Widened && kind != FamilyKind::Tandem {
        return Err(usage("--labels applies to the tandem family only"));
    }
    let spec = FamilySpec::new(kind, level).map_err(usage)?;
    let grid = match kind {
        FamilyKind::Tandem => families::tandem_family_with(level, labels),
        _ => families::generate(spec),
    }
    .map_err(usage)?;
    let bytes = save_grid(&grid, grid_format(format, &grid)?).map_err(usage)?;
    write_output(out, &bytes)?;
    if let Some(path) = witness_path {
        let set = match kind {
            FamilyKind::Tandem => families::tandem_witnesses_with(level, labels),
            _ => families::witnesses(spec),
        }
        .map_err(usage)?;
        fs::write(path, set.to_text())
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    eprintln!(
        "{spec}: {}x{} grid, alphabet {}",
        grid.rows(),
        grid.cols(),
        grid.alphabet()
    );
    Ok(0)
}

/// Loads a grid file, or builds a family from `kind:level`.
fn resolve_grid(source: &str) -> Result<(Option<FamilyKind>, Grid2D), Failure> {
    if let Some((kind, level)) = source.split_once(':') {
        if let (Ok(kind), Ok(level)) = (kind.parse::<FamilyKind>(), level.parse::<u32>()) {
            let spec = FamilySpec::new(kind, level).map_err(usage)?;
            return Ok((Some(kind), families::generate(spec).map_err(usage)?));
        }
    }
    let bytes = fs::read(source).map_err(|e| usage(format!("cannot read {source}: {e}")))?;
    let format = if source.ends_with(".pbm") || bytes.starts_with(b"P1") {
        GridFormat::Pbm
    } else {
        GridFormat::Text
    };
    let grid = load_grid(&bytes, format).map_err(|e| usage(format!("{source}: {e}")))?;
    Ok((None, grid))
}

#[derive(Serialize)]
struct CountReport {
    family: Option<FamilyKind>,
    dims: [usize; 2],
    tandems_h: Option<usize>,
    tandems_v: Option<usize>,
    quartics: Option<usize>,
    runs: Option<usize>,
    elapsed_ms: u128,
}

fn count(
    what: Repetition,
    source: &str,
    mode: Mode,
    cap: Option<usize>,
    format: Format,
) -> Result<u8, Failure> {
    let (family, grid) = resolve_grid(source)?;
    let cap = cap.map_or_else(OracleCap::default, OracleCap);
    let start = Instant::now();
    let want = |r: Repetition| what == r || what == Repetition::All;
    let mut report = CountReport {
        family,
        dims: [grid.rows(), grid.cols()],
        tandems_h: None,
        tandems_v: None,
        quartics: None,
        runs: None,
        elapsed_ms: 0,
    };
    if want(Repetition::Tandems) {
        let t = match mode {
            Mode::Fast => repetitions::count_distinct_tandems(&grid),
            Mode::Oracle => naive::count_distinct_tandems(&grid, cap).map_err(usage)?,
        };
        report.tandems_h = Some(t.horizontal);
        report.tandems_v = Some(t.vertical);
    }
    if want(Repetition::Quartics) {
        report.quartics = Some(match mode {
            Mode::Fast => repetitions::count_distinct_quartics(&grid),
            Mode::Oracle => naive::count_distinct_quartics(&grid, cap).map_err(usage)?,
        });
    }
    if want(Repetition::Runs) {
        report.runs = Some(match mode {
            Mode::Fast => repetitions::enumerate_runs(&grid).len(),
            Mode::Oracle => naive::enumerate_runs(&grid, cap, Default::default())
                .map_err(usage)?
                .len(),
        });
    }
    report.elapsed_ms = start.elapsed().as_millis();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Text => {
            println!("dims: {}x{}", grid.rows(), grid.cols());
            for (name, value) in [
                ("tandems_h", report.tandems_h),
                ("tandems_v", report.tandems_v),
                ("quartics", report.quartics),
                ("runs", report.runs),
            ] {
                if let Some(v) = value {
                    println!("{name}: {v}");
                }
            }
        }
        _ => return Err(usage("count output is json or text")),
    }
    Ok(0)
}

/// Full count of the repetition a family is built for.
fn measure(kind: FamilyKind, grid: &Grid2D, mode: Mode, cap: OracleCap) -> Result<u128, Failure> {
    let value = match (kind, mode) {
        (FamilyKind::Tandem, Mode::Fast) => repetitions::count_distinct_tandems(grid).horizontal,
        (FamilyKind::Tandem, Mode::Oracle) => {
            naive::count_distinct_tandems(grid, cap)
                .map_err(usage)?
                .horizontal
        }
        (FamilyKind::Run, Mode::Fast) => repetitions::enumerate_runs(grid).len(),
        (FamilyKind::Run, Mode::Oracle) => naive::enumerate_runs(grid, cap, Default::default())
            .map_err(usage)?
            .len(),
        (_, Mode::Fast) => repetitions::count_distinct_quartics(grid),
        (_, Mode::Oracle) => naive::count_distinct_quartics(grid, cap).map_err(usage)?,
    };
    Ok(value as u128)
}

#[derive(Serialize)]
struct WitnessSummary {
    total: usize,
    verified: usize,
    failed: usize,
    distinct: usize,
    collisions: usize,
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    family: FamilyKind,
    level: u32,
    dims: [usize; 2],
    predicted: PredictedCounts,
    measured: Option<u128>,
    witnesses: WitnessSummary,
    /// First offending rectangles, as `[top, left, height, width]`.
    failed_rects: Vec<[usize; 4]>,
    checks: Vec<Check>,
    mode: &'static str,
    elapsed_ms: u128,
    verdict: &'static str,
}

fn verify(
    kind: FamilyKind,
    level: u32,
    mode: Mode,
    cap: Option<usize>,
    measure_cap: usize,
) -> Result<u8, Failure> {
    let start = Instant::now();
    let spec = FamilySpec::new(kind, level).map_err(usage)?;
    let predicted = PredictedCounts::for_spec(spec).map_err(usage)?;
    let grid = families::generate(spec).map_err(usage)?;
    let set = families::witnesses(spec).map_err(usage)?;
    let witness_report = verify_witnesses(&grid, &set);
    let expected = predicted.witness_total();

    let mut checks = vec![
        Check {
            name: format!("witness count equals predicted {expected}"),
            passed: set.len() as u128 == expected,
        },
        Check {
            name: "every witness verifies".into(),
            passed: witness_report.failed.is_empty(),
        },
        Check {
            name: "witnesses are pairwise distinct".into(),
            passed: witness_report.distinct == witness_report.total,
        },
    ];
    if let PredictedCounts::QuarticBinary(b) = &predicted {
        if level >= 4 {
            checks.push(Check {
                name: format!("exact count exceeds lower bound {}", b.bound),
                passed: b.bound_holds(),
            });
        }
    }
    let measured = if grid.area() <= measure_cap {
        let cap = cap.map_or_else(OracleCap::default, OracleCap);
        let value = measure(kind, &grid, mode, cap)?;
        checks.push(Check {
            name: format!("measured count is at least {expected}"),
            passed: value >= expected,
        });
        Some(value)
    } else {
        None
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        family: kind,
        level,
        dims: [grid.rows(), grid.cols()],
        predicted,
        measured,
        witnesses: WitnessSummary {
            total: witness_report.total,
            verified: witness_report.verified,
            failed: witness_report.failed.len(),
            distinct: witness_report.distinct,
            collisions: witness_report.collisions,
        },
        failed_rects: witness_report
            .failed
            .iter()
            .take(20)
            .map(|r| [r.top, r.left, r.height, r.width])
            .collect(),
        checks,
        mode: match mode {
            Mode::Fast => "fast",
            Mode::Oracle => "oracle",
        },
        elapsed_ms: start.elapsed().as_millis(),
        verdict: if passed { "pass" } else { "fail" },
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(if passed { 0 } else { 1 })
}

fn report(kind: FamilyKind, from: u32, to: u32, measure_cap: usize) -> Result<u8, Failure> {
    if from < kind.min_level() || from > to || to > 10 {
        return Err(usage(format!(
            "level range must satisfy {} <= from <= to <= 10",
            kind.min_level()
        )));
    }
    let normalizer = match kind {
        FamilyKind::Tandem => "n^3",
        _ => "n^2*log2(n)",
    };
    println!("level,n,predicted,measured,ratio_{normalizer}");
    for level in from..=to {
        let spec = FamilySpec::new(kind, level).map_err(usage)?;
        let predicted = PredictedCounts::for_spec(spec).map_err(usage)?;
        let n = predicted.side();
        let total = predicted.witness_total();
        let nf = n as f64;
        let ratio = match kind {
            FamilyKind::Tandem => total as f64 / nf.powi(3),
            _ => total as f64 / (nf * nf * nf.log2()),
        };
        let measured = if n * n <= measure_cap as u128 {
            let grid = families::generate(spec).map_err(usage)?;
            measure(kind, &grid, Mode::Fast, OracleCap::default())?.to_string()
        } else {
            String::new()
        };
        println!("{level},{n},{total},{measured},{ratio:.6}");
    }
    Ok(0)
}
