use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grpact::action::parse_graph_file;
use grpact::graph::to_dot;
use grpact::scenario::{self, Overrides, RunOptions, Scenario};
use grpact::Error;

const EXIT_ASSERTION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "grpact", version, about = "Run group-action scenarios on finite balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a builtin scenario or a scenario file and print its report.
    Run {
        /// Builtin name or path to a scenario JSON file.
        scenario: String,
        #[command(flatten)]
        flags: RunFlags,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Stop at the first operation whose checks fail.
        #[arg(long = "assert")]
        fail_fast: bool,
    },
    /// List builtin scenarios.
    List,
    /// Show what a scenario builds and checks.
    Describe { scenario: String },
    /// Print DOT for every graph a scenario builds, or for a graph file.
    ExportDot {
        /// Builtin name, scenario JSON file or adjacency-list graph file.
        target: String,
        #[command(flatten)]
        flags: RunFlags,
    },
}

#[derive(Args)]
struct RunFlags {
    /// Replace the primary radius of every operation.
    #[arg(long)]
    radius: Option<u32>,
    /// Replace the depth of every horoball.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long = "budget-vertices")]
    budget_vertices: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            radius: self.radius,
            depth: self.depth,
            budget_vertices: self.budget_vertices,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } | Error::Truncated(_) => EXIT_BUDGET,
        _ => EXIT_CONFIG,
    }
}

/// Resolves a builtin name or a scenario file, with the directory used for
/// relative `file` references.
fn load(target: &str) -> grpact::Result<(Scenario, Option<PathBuf>)> {
    if let Some(src) = scenario::builtin_source(target) {
        return Ok((Scenario::from_json(src)?, None));
    }
    let path = Path::new(target);
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::config(
            "scenario",
            format!("`{target}` is neither a builtin nor a readable file: {e}"),
        )
    })?;
    let dir = path.parent().map(Path::to_path_buf);
    Ok((Scenario::from_json(&text)?, dir))
}

fn run(target: &str, flags: &RunFlags, fail_fast: bool) -> grpact::Result<scenario::RunReport> {
    let (mut sc, base_dir) = load(target)?;
    flags.overrides().apply(&mut sc)?;
    scenario::run(&sc, &RunOptions { fail_fast, base_dir })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            flags,
            format,
            fail_fast,
        } => run(&scenario, &flags, fail_fast).map(|report| {
            let out = match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Dot => report.to_dot(),
            };
            print!("{out}");
            eprint!("{}", report.summary());
            if report.passed {
                0
            } else {
                EXIT_ASSERTION
            }
        }),
        Command::List => {
            for name in scenario::builtin_names() {
                let sc = scenario::builtin(name).expect("builtin scenarios parse");
                println!("{name}\t{}", sc.description);
            }
            Ok(0)
        }
        Command::Describe { scenario } => load(&scenario).map(|(sc, _)| {
            println!("{}: {}", sc.name, sc.description);
            println!("group: {}", serde_json::to_string(&sc.group).expect("group serializes"));
            if !sc.x.is_empty() {
                println!("x: {}", sc.x.join(", "));
            }
            for s in &sc.subgroups {
                println!("subgroup {} = <{}>", s.name, s.generators.join(", "));
            }
            for (i, op) in sc.operations.iter().enumerate() {
                println!("  [{i}] {}", op.name());
            }
            println!("{}", sc.to_json());
            0
        }),
        Command::ExportDot { target, flags } => export_dot(&target, &flags),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn export_dot(target: &str, flags: &RunFlags) -> grpact::Result<u8> {
    let is_scenario = scenario::builtin_source(target).is_some() || target.ends_with(".json");
    if is_scenario {
        let report = run(target, flags, false)?;
        let dot = report.to_dot();
        if dot.is_empty() {
            return Err(Error::config("scenario", "no operation builds a graph"));
        }
        print!("{dot}");
        return Ok(0);
    }
    let text = std::fs::read_to_string(target)
        .map_err(|e| Error::config("target", format!("{target}: {e}")))?;
    let (graph, labels, _) = parse_graph_file(&text)?;
    let name = Path::new(target)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into());
    print!("{}", to_dot(&name, &graph, &labels, None, &[]));
    Ok(0)
}
