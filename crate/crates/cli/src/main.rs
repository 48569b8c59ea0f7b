use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mapcalc_cli::{cmd_converge, cmd_demo, cmd_verify, order_label, CliError, Format, Overrides};
use mapcalc_core::suites::Status;

#[derive(Parser)]
#[command(name = "mapcalc", version, about = "Differential forms on mapping spaces: identity suites, convergence studies and demos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON config file; flags take precedence over its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    nodes: Option<usize>,
}

impl From<&Common> for Overrides {
    fn from(c: &Common) -> Self {
        Overrides { config: c.config.clone(), seed: c.seed, nodes: c.nodes }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites and write a report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run; repeat for several.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, default_value = "mapcalc-report.json")]
        out: PathBuf,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Residual against step size over a ladder of node counts.
    Converge {
        #[command(flatten)]
        common: Common,
        /// One of derivation, boundary, two-route.
        #[arg(long)]
        identity: Option<String>,
        /// Node counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Run a named demo: mw-links, dualpair or branes.
    Demo {
        name: String,
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { common, suites, out, format } => {
            let report = cmd_verify(&suites, &(&common).into(), &out, format)?;
            let failures: Vec<_> = report.failures().collect();
            for r in &failures {
                println!(
                    "FAIL {} [{}] residual {:.3e} tolerance {:.1e}",
                    r.id, r.anchor, r.residual, r.tolerance
                );
            }
            let count = |s: Status| report.records.iter().filter(|r| r.status == s).count();
            println!(
                "{} passed, {} failed, {} inapplicable; report written to {}",
                count(Status::Pass),
                failures.len(),
                count(Status::Inapplicable),
                out.display()
            );
            Ok(report.passed)
        }
        Command::Converge { common, identity, levels, out, format } => {
            let study = cmd_converge(identity.as_deref(), &levels, &(&common).into(), out.as_deref(), format)?;
            if out.is_none() {
                print!("{}", mapcalc_cli::converge_csv(&study));
            }
            println!("# identity {} on {}: fitted order {}", study.identity, study.domain, order_label(&study));
            Ok(study.fit.is_none() || study.acceptable())
        }
        Command::Demo { name, common, out } => {
            let dir = out.unwrap_or_else(|| PathBuf::from(format!("demo-{name}")));
            let demo = cmd_demo(&name, &(&common).into(), &dir)?;
            println!(
                "demo {} {}: wrote {} and {}",
                demo.name,
                if demo.passed { "passed" } else { "FAILED" },
                demo.csv.display(),
                demo.summary.display()
            );
            Ok(demo.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("mapcalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
