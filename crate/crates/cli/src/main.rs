mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use l2lab::group::{parse_radius_cap, MAX_BALL_RADIUS_ENV};
use l2lab::verify::VerifyOptions;
use l2lab::{Error, GroupId};

use commands::{Context, Outcome, Output};
use output::{render, Format};

const EXIT_VALIDATION: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "l2lab", version, about = "Exact kernel dimensions of hook operators over lamplighter-type groups")]
struct Cli {
    /// Base group: free2 or wreath.
    #[arg(long, global = true, default_value = "free2")]
    group: String,
    /// Index set: JSON array such as [2,5], a tagged JSON object, or a file (optionally prefixed with @).
    #[arg(long = "index-set", global = true, default_value = "[2]")]
    index_set: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; `models` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of the kernel by the closed form and the direct hook sum.
    Dim {
        #[arg(long, default_value_t = 4)]
        terms: usize,
        #[arg(long = "truncation", short = 'L', default_value_t = 80)]
        truncation: u64,
        /// Use the constants obtained from the exact hook sum instead of the printed ones.
        #[arg(long)]
        hook_sum: bool,
    },
    /// Kernel dimensions of the path models at -2.
    Models {
        #[arg(long = "l-max", default_value_t = 20)]
        l_max: usize,
    },
    /// Exact cylinder measures: a hook (--legs N M) or a window count (--window JSON).
    Measure {
        #[arg(long, num_args = 2, value_names = ["N", "M"])]
        legs: Option<Vec<u32>>,
        #[arg(long)]
        window: Option<String>,
    },
    /// Monte-Carlo frequency of a hook cylinder.
    Sample {
        #[arg(long, num_args = 2, value_names = ["N", "M"], default_values_t = [1, 1])]
        legs: Vec<u32>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Realizes a target number as a combination of dimension atoms.
    Target {
        /// Binary fraction such as 0.1011, or a rational p/q.
        #[arg(long)]
        value: String,
        #[arg(long, default_value_t = 64)]
        precision: u32,
        #[arg(long)]
        d: Option<u32>,
    },
    /// Decides membership of a vector, given as a JSON list of element strings.
    Member {
        #[arg(long)]
        vector: String,
    },
    /// First relations of the recursive presentation.
    Relations {
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Runs an oracle suite, or `all`.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 100_000)]
        completions: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long = "l-max", default_value_t = 500)]
        l_max: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_VERIFICATION,
        _ => EXIT_VALIDATION,
    }
}

fn legs_pair(v: &[u32]) -> (u32, u32) {
    (v[0], v[1])
}

fn run(cli: &Cli) -> Result<(Outcome, Format), Error> {
    if let Ok(v) = std::env::var(MAX_BALL_RADIUS_ENV) {
        if parse_radius_cap(&v).is_none() {
            return Err(Error::Validation(format!("{MAX_BALL_RADIUS_ENV} must be a nonnegative integer, got {v:?}")));
        }
    }
    let group: GroupId = cli.group.parse()?;
    let index_set = commands::parse_index_set(&cli.index_set)?;
    let default_format = if matches!(cli.command, Command::Models { .. }) { Format::Csv } else { Format::Json };
    let format = cli.format.unwrap_or(default_format);
    let ctx = Context { group, index_set, seed: cli.seed, format };
    let outcome = match &cli.command {
        Command::Dim { terms, truncation, hook_sum } => commands::dim(&ctx, *terms, *truncation, *hook_sum)?,
        Command::Models { l_max } => commands::models(&ctx, *l_max)?,
        Command::Measure { legs, window } => commands::measure(&ctx, legs.as_deref().map(legs_pair), window.as_deref())?,
        Command::Sample { legs, samples } => commands::sample(&ctx, legs_pair(legs), *samples)?,
        Command::Target { value, precision, d } => commands::target(value, *precision, *d)?,
        Command::Member { vector } => commands::member(&ctx, vector)?,
        Command::Relations { count } => commands::relations(&ctx, *count)?,
        Command::Verify { suite, samples, completions, trials, l_max } => {
            let opts = VerifyOptions {
                seed: cli.seed,
                samples: *samples,
                completions: *completions,
                member_trials: *trials,
                model_l_max: *l_max,
                ..VerifyOptions::default()
            };
            commands::verify(suite, &opts)?
        }
    };
    Ok((outcome, format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((outcome, format)) => {
            let text = match &outcome.output {
                Output::Text(t) => t.clone(),
                Output::Value(v) => match render(v, format) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_VERIFICATION);
                    }
                },
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
