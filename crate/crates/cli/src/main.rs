use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lawson_core::export::{export_mesh, ProjectionFrame};
use lawson_core::groups::GroupSpec;
use lawson_core::plateau::SolverOptions;
use lawson_core::report::{
    conjugation_report, genus_report, genus_table_specs, groups_report, isometry_report, lift_report, quads_report,
    quotient_report, report_all, solve_report, ReportOptions, Verdict,
};

#[derive(Debug, Parser)]
#[command(name = "lawson", version, about = "Symmetric minimal surfaces in the three-sphere: verification and meshes")]
struct Cli {
    /// Absolute tolerance for the quadrilateral table comparison.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Grid refinement of the minimal disk (cells per quadrilateral edge).
    #[arg(long, global = true, default_value_t = 16)]
    refinement: usize,
    /// Largest number of triangles of a closed surface; lowers the refinement if needed.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    budget: usize,
    /// Seed for all sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory receiving meshes and report files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subgroup {
    Poincare,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orders of the enumerated symmetry groups and of the isometric groups.
    VerifyGroups,
    /// Lengths, angles and properness of the fundamental quadrilaterals.
    VerifyQuads,
    /// Genus table, or the genus of one spec.
    Genus {
        #[arg(long)]
        spec: Option<GroupSpec>,
    },
    /// Holonomy of horizontal lifts, plus the fibre-shift conjugation.
    Lift,
    /// Solve the Plateau problem for a spec and write its closed surface.
    Solve { spec: GroupSpec },
    /// Genus of the quotient surface by a free subgroup.
    Quotient {
        spec: GroupSpec,
        #[arg(value_enum)]
        subgroup: Subgroup,
    },
    /// The complete verification suite as one document.
    ReportAll,
}

#[derive(Serialize)]
struct Combined<A, B> {
    #[serde(flatten)]
    first: A,
    #[serde(flatten)]
    second: B,
}

#[derive(Serialize)]
struct Groups<T> {
    groups: T,
}

#[derive(Serialize)]
struct Isometry<T> {
    isometry: T,
}

#[derive(Serialize)]
struct Lift<T> {
    lift: T,
}

#[derive(Serialize)]
struct Conjugation<T> {
    conjugation: T,
}

fn file_stem(spec: GroupSpec) -> String {
    let raw: String = spec.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    raw.split('_').filter(|s| !s.is_empty()).collect::<Vec<_>>().join("_")
}

fn emit<T: Serialize>(value: &T, text: String, format: Format) -> Result<(), Box<dyn std::error::Error>> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{text}"),
    }
    Ok(())
}

fn write_report<T: Serialize>(dir: &Path, stem: &str, value: &T) -> Result<(), Box<dyn std::error::Error>> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{stem}.report.json")), serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Box<dyn std::error::Error>> {
    let opts = ReportOptions {
        tol: cli.tol,
        seed: cli.seed,
        budget: cli.budget,
        solver: SolverOptions { refinement: cli.refinement, ..SolverOptions::default() },
    };
    let pass = match &cli.command {
        Command::VerifyGroups => {
            let groups = groups_report()?;
            let isometry = isometry_report();
            let pass = groups.pass() && isometry.pass();
            let text = groups.text() + &isometry.text();
            emit(&Combined { first: Groups { groups }, second: Isometry { isometry } }, text, cli.format)?;
            pass
        }
        Command::VerifyQuads => {
            let report = quads_report(cli.tol)?;
            emit(&report, report.text(), cli.format)?;
            report.pass()
        }
        Command::Genus { spec } => {
            let specs = spec.map_or_else(genus_table_specs, |s| vec![s]);
            let report = genus_report(&specs)?;
            emit(&report, report.text(), cli.format)?;
            report.pass()
        }
        Command::Lift => {
            let lift = lift_report(cli.seed)?;
            let conjugation = conjugation_report(&[GroupSpec::T(3), GroupSpec::O(3)])?;
            let pass = lift.pass() && conjugation.pass();
            let text = lift.text() + &conjugation.text();
            emit(&Combined { first: Lift { lift }, second: Conjugation { conjugation } }, text, cli.format)?;
            pass
        }
        Command::Solve { spec } => {
            let (report, closed) = solve_report(*spec, &opts)?;
            let stem = file_stem(*spec);
            export_mesh(&closed, &ProjectionFrame::avoiding(&closed.vertices), &cli.out_dir, &stem)?;
            write_report(&cli.out_dir, &stem, &report)?;
            emit(&report, report.text(), cli.format)?;
            report.pass()
        }
        Command::Quotient { spec, subgroup: Subgroup::Poincare } => {
            let report = quotient_report(*spec);
            emit(&report, report.text(), cli.format)?;
            report.pass()
        }
        Command::ReportAll => {
            let report = report_all(&opts)?;
            write_report(&cli.out_dir, "report-all", &report)?;
            emit(&report, report.text(), cli.format)?;
            report.pass()
        }
    };
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
