use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ribbons::harness::{
    cmd_betti, cmd_blowup, cmd_clifford, cmd_verify_green, exit_code_for, strategy_from_env, BettiSource,
    CliffordSelection, Outcome, OutputFormat, RunConfig, DEFAULT_GENUS_MAX, EXIT_USAGE,
};
use ribbons::koszul::TableOptions;
use ribbons::{Error, Ribbon};

#[derive(Parser)]
#[command(name = "ribbon", version, about = "Clifford indices and Betti tables of rational ribbons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Clifford index of a ribbon.
    Clifford {
        /// Ribbon JSON file, `-` for stdin.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Compute the Betti table of a constructed or given ribbon.
    Betti {
        #[arg(long, required_unless_present = "input", requires = "clifford")]
        genus: Option<u32>,
        #[arg(long)]
        clifford: Option<u32>,
        /// Ribbon JSON file instead of a construction.
        #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["genus", "clifford"])]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Blow a ribbon up at a point (a rational number or `inf`).
    Blowup {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check Green's predicate, duality and carpet invariance over a range
    /// of genera.
    VerifyGreen {
        #[arg(long, default_value_t = DEFAULT_GENUS_MAX)]
        genus_max: u32,
        #[arg(long, default_value_t = 3)]
        genus_min: u32,
        /// Comma separated Clifford indices; all valid ones by default.
        #[arg(long, value_delimiter = ',')]
        clifford: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compute every rank over the rationals.
        #[arg(long)]
        exact_only: bool,
        #[arg(long, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<String, Error> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    Ok(s)
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), Error> {
    match cli.command {
        Command::Clifford { input } => Ok((cmd_clifford(&read_input(&input)?)?, None)),
        Command::Betti {
            genus,
            clifford,
            input,
            seed,
            format,
            out,
        } => {
            let source = match (input, genus, clifford) {
                (Some(path), _, _) => BettiSource::Ribbon(Ribbon::from_json(&read_input(&path)?)?),
                (None, Some(genus), Some(clifford)) => BettiSource::Construct { genus, clifford, seed },
                _ => return Err(Error::InvalidInput("give --genus and --clifford, or --in".into())),
            };
            let opts = TableOptions {
                strategy: strategy_from_env()?,
                ..TableOptions::default()
            };
            Ok((cmd_betti(&source, format, &opts)?, out))
        }
        Command::Blowup { input, point, out } => Ok((cmd_blowup(&read_input(&input)?, &point)?, out)),
        Command::VerifyGreen {
            genus_max,
            genus_min,
            clifford,
            seed,
            exact_only,
            format,
            out,
        } => {
            let cfg = RunConfig {
                genus_min,
                genus_max,
                clifford: if clifford.is_empty() {
                    CliffordSelection::All
                } else {
                    CliffordSelection::Only(clifford)
                },
                seed,
                strategy: strategy_from_env()?,
                exact_only,
                format,
                out: out.clone(),
            };
            Ok((cmd_verify_green(&cfg)?, out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = match run(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &outcome.output) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{}", outcome.output),
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    ExitCode::from(outcome.exit_code() as u8)
}
