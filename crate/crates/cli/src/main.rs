use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use chow_cli::session::{run_script, RunError};
use chow_core::so4pipeline::{run_all, Config};
use clap::{Parser, Subcommand, ValueEnum};

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "chow", version, about = "Intersection theory on Grassmann bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the SO(4) computation and report every check.
    VerifySo4 {
        #[arg(long, env = "CHOW_DEGREE_BOUND", default_value_t = 10)]
        degree_bound: u32,
        #[arg(long, default_value_t = Config::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a `.chow` script and print its transcript.
    Eval {
        file: PathBuf,
        #[arg(long, env = "CHOW_DEGREE_BOUND", default_value_t = 10)]
        degree_bound: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifySo4 {
            degree_bound,
            seed,
            format,
            out,
        } => {
            let config = Config {
                degree_bound,
                seed,
                ..Config::default()
            };
            let report = run_all(&config);
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => to_json(&report),
            };
            if let Err(e) = emit(&text, out.as_ref()) {
                eprintln!("chow: {e}");
                return ExitCode::from(USAGE_ERROR);
            }
            ExitCode::from(u8::from(!report.passed()))
        }
        Command::Eval {
            file,
            degree_bound,
            format,
        } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("chow: {}: {e}", file.display());
                    return ExitCode::from(USAGE_ERROR);
                }
            };
            let show = |t: &chow_cli::session::Transcript| match format {
                Format::Text => print!("{}", t.to_text()),
                Format::Json => print!("{}", to_json(t)),
            };
            match run_script(&text, degree_bound) {
                Ok(t) => {
                    show(&t);
                    ExitCode::from(u8::from(!t.passed()))
                }
                Err(RunError::Parse(e)) => {
                    eprintln!("{}:{e}", file.display());
                    ExitCode::from(USAGE_ERROR)
                }
                Err(RunError::Eval(partial, e)) => {
                    show(&partial);
                    eprintln!("{}:{e}", file.display());
                    ExitCode::from(USAGE_ERROR)
                }
            }
        }
    }
}
