mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use minbound::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use commands::Settings;
use input::{parse_input, DEFAULT_RESOLUTION};

#[derive(Parser, Debug)]
#[command(name = "minbound", version, about = "Certified bounds for minima and separations of semialgebraic systems")]
struct Cli {
    /// Size budget: matrix dimension limit; grid and box limits scale with it.
    #[arg(long, global = true, default_value_t = 3000)]
    budget: usize,
    /// Override the oracle grid resolution of every component.
    #[arg(long, global = true)]
    resolution: Option<u32>,
    /// Target width of enclosures, as a rational (`1/1048576`) or `2^-k`.
    #[arg(long, global = true, default_value = "2^-20")]
    target_width: String,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, magnitude and coefficient bounds of the input.
    Bounds { input: PathBuf },
    /// Certificate polynomials Q, for every selector or just one.
    Qpoly {
        input: PathBuf,
        /// Comma-separated 1-based constraint indices, equalities first.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        /// Comma-separated signs (`+` or `-`), one per subset index.
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
    },
    /// Compare the minimum over a component against the bounds.
    Certify { input: PathBuf },
    /// Compare the distance between two components against the separation bound.
    Separate { input: PathBuf },
    /// Emit the two-point example family as an input document.
    Example {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 4)]
        h: u64,
    },
}

fn parse_width(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let w = if let Some(k) = t.strip_prefix("2^-") {
        let k: u32 = k.parse().map_err(|_| format!("bad exponent in {t:?}"))?;
        BigRational::new(BigInt::one(), BigInt::one() << k)
    } else {
        BigRational::from_str(t).map_err(|_| format!("cannot parse {t:?} as a rational"))?
    };
    if !w.is_positive() {
        return Err("target width must be positive".into());
    }
    Ok(w)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        Error::Parse(_)
        | Error::InvalidSystem(_)
        | Error::OddDegree(_)
        | Error::InvalidSelector(_)
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::VarCountMismatch { .. }
        | Error::VarIndexOutOfRange { .. }
        | Error::HomogenizationDegree { .. } => 2,
        _ => 1,
    }
}

fn read(path: &PathBuf) -> Result<input::InputDocument, (u8, String)> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| (2, format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| (2, format!("{}: {e}", path.display())))?
    };
    parse_input(&text).map_err(|e| (2, format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(String, bool), (u8, String)> {
    let settings = Settings {
        budget: cli.budget,
        resolution: cli.resolution,
        target_width: parse_width(&cli.target_width).map_err(|e| (2, e))?,
    };
    if settings.resolution == Some(0) {
        return Err((2, "resolution must be positive".into()));
    }
    let core = |e: Error| (exit_code(&e), e.to_string());
    let report = match &cli.command {
        Command::Bounds { input } => commands::cmd_bounds(&read(input)?, &settings).map_err(core)?,
        Command::Qpoly { input, subset, signs } => {
            commands::cmd_qpoly(&read(input)?, subset.as_deref(), signs.as_deref(), &settings).map_err(core)?
        }
        Command::Certify { input } => commands::cmd_certify(&read(input)?, &settings).map_err(core)?,
        Command::Separate { input } => commands::cmd_separate(&read(input)?, &settings).map_err(core)?,
        Command::Example { n, d, h } => {
            let text =
                commands::cmd_example(*n, *d, *h, settings.resolution.unwrap_or(DEFAULT_RESOLUTION)).map_err(core)?;
            return Ok((text, false));
        }
    };
    Ok((report.render(), report.failed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("minbound: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((text, failed)) => {
            let written = match &cli.output {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("minbound: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(u8::from(failed))
        }
        Err((code, msg)) => {
            eprintln!("minbound: {msg}");
            ExitCode::from(code)
        }
    }
}
