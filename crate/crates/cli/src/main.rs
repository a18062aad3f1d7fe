use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jsr_cli::commands::{cmd_bound, cmd_converge, cmd_growth, parse_methods, BoundOptions, GrowthOptions};
use jsr_cli::selftest::{self, Hooks};
use jsr_cli::{read_input, Arithmetic, CliError, OutputFormat};
use jsr_core::{EnumOptions, PruneMode, DEFAULT_BUDGET, DEFAULT_MAX_REL_WIDTH, DEFAULT_REL_TOL};

#[derive(Parser)]
#[command(
    name = "jsr",
    version,
    about = "Certified bounds on the joint spectral radius of nonnegative matrix sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound intervals for n = 1..n-max per method, and their intersection.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Comma list of main, connected, traditional, blondel, or all.
        #[arg(long, default_value = "all")]
        method: String,
        #[arg(long, default_value = "exact")]
        arithmetic: Arithmetic,
        #[arg(long, default_value = "table")]
        output: OutputFormat,
    },
    /// Component rates, growth exponent r and the normalized norms q_n.
    Growth {
        #[command(flatten)]
        common: Common,
        /// Classification depth; chosen from the budget when omitted.
        #[arg(long)]
        n_cls: Option<usize>,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value = "table")]
        output: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_MAX_REL_WIDTH)]
        max_rel_width: f64,
        #[arg(long, default_value_t = 0, hide = true)]
        r_offset: usize,
    },
    /// Running best bounds, gap and gap·n per n, as CSV by default.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value = "all")]
        method: String,
        #[arg(long, default_value = "exact")]
        arithmetic: Arithmetic,
        #[arg(long, default_value = "csv")]
        output: OutputFormat,
    },
    /// Embedded regressions and reduced property checks.
    Selftest {
        #[arg(long, hide = true)]
        break_pruning: bool,
        #[arg(long, default_value_t = 0, hide = true)]
        r_offset: usize,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    /// Maximum number of products kept per length.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value = "on", value_parser = ["on", "off"])]
    prune: String,
    #[arg(long, hide = true)]
    break_pruning: bool,
}

impl Common {
    fn enumeration(&self) -> EnumOptions {
        let prune = match (self.break_pruning, self.prune.as_str()) {
            (true, _) => PruneMode::BrokenForTesting,
            (false, "off") => PruneMode::Off,
            _ => PruneMode::Dominance,
        };
        EnumOptions {
            prune,
            budget: self.budget,
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Bound {
            common,
            n_max,
            method,
            arithmetic,
            output,
        } => {
            let input = read_input(&common.input)?;
            let o = BoundOptions {
                n_max,
                methods: parse_methods(&method).map_err(CliError::Parse)?,
                arithmetic,
                rel_tol: common.rel_tol,
                enumeration: common.enumeration(),
            };
            let out = cmd_bound(&input, &o, output)?;
            print!("{}", out.text);
            Ok(out.exit_code)
        }
        Command::Growth {
            common,
            n_cls,
            n_max,
            output,
            max_rel_width,
            r_offset,
        } => {
            let input = read_input(&common.input)?;
            let o = GrowthOptions {
                n_cls,
                n_max,
                rel_tol: common.rel_tol,
                max_rel_width,
                enumeration: common.enumeration(),
                r_offset,
            };
            let out = cmd_growth(&input, &o, output)?;
            print!("{}", out.text);
            Ok(out.exit_code)
        }
        Command::Converge {
            common,
            n_max,
            method,
            arithmetic,
            output,
        } => {
            let input = read_input(&common.input)?;
            let o = BoundOptions {
                n_max,
                methods: parse_methods(&method).map_err(CliError::Parse)?,
                arithmetic,
                rel_tol: common.rel_tol,
                enumeration: common.enumeration(),
            };
            let out = cmd_converge(&input, &o, output)?;
            print!("{}", out.text);
            Ok(out.exit_code)
        }
        Command::Selftest {
            break_pruning,
            r_offset,
        } => {
            let summary = selftest::run(Hooks {
                break_pruning,
                r_offset,
            });
            print!("{}", summary.render());
            Ok(if summary.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
