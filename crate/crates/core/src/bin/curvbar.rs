use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curvbar::scenario::{domain_cap, execute, primary_file_name, scenario_schema, Command, ScenarioConfig};

/// Jacobi fields, radial graph curvatures and rotational barriers in `M^n x R`.
///
/// Manifolds are written `space_form:<c>:<n>` or `custom:<warp>:<n>` with warps
/// `sinh_cubic`, `ripple`, `tanh_cigar`. Exit status: 0 success, 1 usage or
/// numerical error, 2 mathematical non-solvability (reported on stdout as JSON).
#[derive(Parser)]
#[command(name = "curvbar", version)]
struct Cli {
    /// Write artifacts into this directory instead of printing the primary one.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand)]
enum Top {
    #[command(flatten)]
    Op(Command),
    /// Run a JSON scenario file.
    Run { config: PathBuf },
    /// Print the JSON schema of scenario files.
    Schema,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, cap, out) = match cli.command {
        Top::Schema => {
            let _ = std::io::stdout().write_all(scenario_schema().as_bytes());
            return ExitCode::SUCCESS;
        }
        Top::Op(command) => (command, domain_cap(), cli.out),
        Top::Run { config } => match ScenarioConfig::load(&config) {
            Ok(cfg) => {
                let cap = cfg.t_max.map_or_else(domain_cap, Ok);
                let out = cli.out.or(cfg.output.map(PathBuf::from));
                (cfg.run, cap, out)
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    let result = cap.and_then(|cap| execute(&command, cap));
    match result {
        Ok(artifacts) => {
            match out {
                Some(dir) => {
                    if let Err(e) = artifacts.write_to(&dir, primary_file_name(&command)) {
                        eprintln!("error: cannot write {}: {e}", dir.display());
                        return ExitCode::from(1);
                    }
                }
                None => {
                    let _ = std::io::stdout().write_all(artifacts.stdout.as_bytes());
                }
            }
            ExitCode::from(artifacts.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
