use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use opposition_cli::{parse_scenario, run_scenario};
use opposition_core::{parse_rational, PiBackend};

#[derive(Parser)]
#[command(
    name = "opposition",
    about = "Coherence checking for conditional-event probability assessments and \
             probabilistic squares/hexagons of opposition",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and report each query's verdict.
    Check(CheckArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Scenario file to run.
    file: PathBuf,
    /// Backend for coherence queries; overrides the scenario's choice.
    #[arg(long, value_enum)]
    backend: Option<BackendChoice>,
    /// Grid step `1/m` for the grid backend.
    #[arg(long, default_value = "1/10")]
    grid_step: String,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write DOT diagrams of verified squares/hexagons into this directory.
    #[arg(long, value_name = "DIR")]
    emit_dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendChoice {
    /// Certified closed forms of the coherent set.
    Exact,
    /// Constituent-mass LP recursion (box regions only).
    Lp,
    /// Lattice scan; confirms but never refutes.
    Grid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check(args) => check(args),
    }
}

fn input_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn check(args: CheckArgs) -> ExitCode {
    let backend = match args.backend {
        None => None,
        Some(BackendChoice::Exact) => Some(PiBackend::Exact),
        Some(BackendChoice::Lp) => Some(PiBackend::LambdaLp),
        Some(BackendChoice::Grid) => {
            let step = match parse_rational(&args.grid_step) {
                Ok(s) => s,
                Err(m) => return input_error(m),
            };
            match PiBackend::grid(step) {
                Ok(b) => Some(b),
                Err(e) => return input_error(e),
            }
        }
    };

    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", args.file.display())),
    };
    let scenario = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return input_error(format!("{}: {e}", args.file.display())),
    };
    let name = args.file.display().to_string();
    let report = match run_scenario(&scenario, &name, backend) {
        Ok(r) => r,
        Err(e) => return input_error(format!("{}: {e}", args.file.display())),
    };

    if let Some(dir) = &args.emit_dot {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return input_error(format!("{}: {e}", dir.display()));
        }
        for q in &report.queries {
            if let Some(dot) = &q.dot {
                let path = dir.join(format!("query{:02}_{}.dot", q.index, dot.kind));
                if let Err(e) = std::fs::write(&path, &dot.source) {
                    return input_error(format!("{}: {e}", path.display()));
                }
            }
        }
    }

    let rendered = if args.json {
        format!("{}\n", report.render_json())
    } else {
        report.render_text()
    };
    // A consumer like `head` may stop reading early; that is not an error.
    if let Err(e) = std::io::stdout().lock().write_all(rendered.as_bytes()) {
        if e.kind() != ErrorKind::BrokenPipe {
            return input_error(e);
        }
    }

    if report.all_expectations_met() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
