use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ruled_moduli::report::{build_report, exit, render_strata, Format, Section, FORMAT_ENV};
use ruled_moduli::strata::{verify_lemma_p1, DEFAULT_MIN_PART};
use ruled_moduli::{parse_config, Config};

#[derive(Parser)]
#[command(
    name = "ruled",
    version,
    about = "Chern-data arithmetic for sheaves on birationally ruled surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Output format: text or json-lines.
    #[arg(long, env = FORMAT_ENV, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Surface-level checks: validate the config and print lattice invariants.
    Surface {
        #[command(subcommand)]
        action: SurfaceAction,
    },
    /// Construct or check a polarization and test H·(K_S+f) < 0.
    Polarize {
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Reduce the Chern data to the geometrically ruled case, with audits.
    Reduce {
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Check the splitting-type stratification on P¹ for rank R and degree -D.
    Strata {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_PART, allow_negative_numbers = true)]
        min_part: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Full report: surface, polarization, reduction, audits, moduli.
    Report {
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum SurfaceAction {
    Check {
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn load(path: &PathBuf) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_sections(path: &PathBuf, sections: &[Section], format: Format) -> Result<i32, String> {
    let config = load(path)?;
    if sections.contains(&Section::Trace) && config.sheaf.rank() < 2 {
        return Err(format!(
            "{}: reduction requires rank >= 2, got {}",
            path.display(),
            config.sheaf.rank()
        ));
    }
    let report = build_report(&config).map_err(|e| e.to_string())?;
    print!("{}", report.render(sections, format));
    Ok(report.exit_code(sections))
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Surface {
            action: SurfaceAction::Check { config, output },
        } => run_sections(&config, &[Section::Surface], output.format),
        Command::Polarize { config, output } => run_sections(
            &config,
            &[Section::Surface, Section::Polarization, Section::Hypothesis],
            output.format,
        ),
        Command::Reduce { config, output } => run_sections(
            &config,
            &[Section::Trace, Section::BaseCase, Section::Audits],
            output.format,
        ),
        Command::Report { config, output } => run_sections(&config, &Section::ALL, output.format),
        Command::Strata {
            rank,
            d,
            min_part,
            output,
        } => {
            let report = verify_lemma_p1(rank, d, min_part).map_err(|e| e.to_string())?;
            print!("{}", render_strata(&report, output.format));
            Ok(if report.passed { exit::OK } else { exit::AUDIT_FAILED })
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage errors would exit with 2, which is reserved
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT_ERROR as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
