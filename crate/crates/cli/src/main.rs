use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sg_core::renorm_counting::LedgerComponent;
use sg_core::wavefront::EdgeRule;

mod cache;
mod commands;

use commands::{Check, ExprFormat, Failure, Outcome, ReportFormat};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_ENVIRONMENT: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "sg", version, about = "Exact sine-Gordon current hierarchy and renormalization checks")]
struct Cli {
    /// Cache directory for computed coefficients and currents.
    #[arg(long, global = true, env = "SG_CACHE_DIR", default_value = ".sg-cache")]
    cache_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Component {
    S2,
    S1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Feynman,
    Antifeynman,
    Wightman,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Bäcklund coefficients A_0 … A_max_nu.
    Backlund {
        #[arg(long)]
        max_nu: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: ExprFormat,
    },
    /// Compute the currents s1^N, s2^N and run the selected checks.
    Currents {
        #[arg(long = "max-N")]
        max_n: usize,
        #[arg(long, value_enum, default_value = "all")]
        check: Check,
        #[arg(long, value_enum, default_value = "text")]
        format: ExprFormat,
    },
    /// Power-counting ledger of one current component.
    Powercount {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum)]
        component: Component,
        /// Highest power of ħ to tabulate.
        #[arg(long, default_value_t = 4)]
        max_p: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Exhaustive covector feasibility sweep over immersed graphs.
    Wavefront {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        n_max: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(1..=6))]
        window: i64,
        #[arg(long, value_enum, default_value = "feynman")]
        rule: Rule,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Backlund { max_nu, format } => commands::backlund(max_nu, format, &cli.cache_dir),
        Command::Currents { max_n, check, format } => commands::currents(max_n, check, format, &cli.cache_dir),
        Command::Powercount {
            n,
            t,
            component,
            max_p,
            format,
        } => {
            let component = match component {
                Component::S2 => LedgerComponent::S2,
                Component::S1 => LedgerComponent::S1,
            };
            commands::powercount(n, t, component, max_p, format)
        }
        Command::Wavefront {
            n_max,
            window,
            rule,
            format,
        } => {
            let rule = match rule {
                Rule::Feynman => EdgeRule::Feynman,
                Rule::Antifeynman => EdgeRule::AntiFeynman,
                Rule::Wightman => EdgeRule::Wightman,
            };
            commands::wavefront(n_max as usize, window, rule, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(outcome.stdout.as_bytes()).and_then(|()| stdout.flush()) {
                eprintln!("sg: cannot write output: {e}");
                return ExitCode::from(EXIT_ENVIRONMENT);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("sg: verification failed");
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(Failure::Environment(e)) => {
            eprintln!("sg: {e:#}");
            ExitCode::from(EXIT_ENVIRONMENT)
        }
        Err(Failure::Invariant(e)) => {
            eprintln!("sg: internal invariant violated: {e:#}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
