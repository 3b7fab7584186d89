mod commands;
mod config;
mod error;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gitenergy::expansion::{Sign, FROZEN_SIGN};

use config::{RunConfig, Settings, VERSION};
use error::{usage, CliError, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "gitenergy", version, about = "Hilbert point weights and energy asymptotics")]
struct Cli {
    /// JSON file with default values for any option below
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write <command>.json and <command>.csv here instead of printing JSON
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<String>,
    #[arg(long, global = true, env = "GITENERGY_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sign convention for the virtual bundle, +1 or -1
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_sign)]
    sign: Option<i64>,
    #[command(subcommand)]
    command: Command,
}

fn parse_sign(s: &str) -> Result<i64, String> {
    match s.trim() {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

#[derive(Args, Debug, Default)]
struct SchemeArgs {
    /// Scheme JSON file
    #[arg(long, value_name = "FILE")]
    scheme: Option<String>,
    /// Built-in corpus entry
    #[arg(long)]
    entry: Option<String>,
    /// Weights r_0,…,r_N of the one-parameter subgroup
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert weights w_λ(m) and the weight polynomial
    Weight {
        #[command(flatten)]
        input: SchemeArgs,
        #[arg(long)]
        mmin: Option<u32>,
        #[arg(long)]
        mmax: Option<u32>,
    },
    /// Expansion coefficients F_l, the c matrix, q_K and virtual bundles
    Expand {
        #[command(flatten)]
        input: SchemeArgs,
        /// Hilbert polynomial as ascending coefficients "c0,c1,…" (instead of a scheme)
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// A functional along the Bergman ray of λ and its slope against log t²
    Energy {
        /// Geometry JSON file
        #[arg(long, value_name = "FILE")]
        geometry: Option<String>,
        /// Scheme JSON file used to report F_l next to the slope
        #[arg(long, value_name = "FILE")]
        ideal: Option<String>,
        #[arg(long)]
        entry: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// aubin, I, J, kenergy or f2
        #[arg(long)]
        functional: Option<String>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// "radial,angular"
        #[arg(long)]
        grid: Option<String>,
    },
    /// Identity checks over a corpus of schemes
    Verify {
        /// Corpus JSON file or directory; defaults to the built-in corpus
        #[arg(long)]
        corpus: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Weight { .. } => "weight",
            Command::Expand { .. } => "expand",
            Command::Energy { .. } => "energy",
            Command::Verify { .. } => "verify",
        }
    }

    fn settings(&self) -> Settings {
        let mut s = Settings::default();
        let scheme = |s: &mut Settings, i: &SchemeArgs| {
            s.scheme = i.scheme.clone();
            s.entry = i.entry.clone();
            s.lambda = i.lambda.clone();
        };
        match self {
            Command::Weight { input, mmin, mmax } => {
                scheme(&mut s, input);
                s.mmin = *mmin;
                s.mmax = *mmax;
            }
            Command::Expand { input, chi, level, m } => {
                scheme(&mut s, input);
                s.chi = chi.clone();
                s.level = *level;
                s.m = *m;
            }
            Command::Energy { geometry, ideal, entry, lambda, functional, level, tmin, tmax, samples, grid } => {
                s.geometry = geometry.clone();
                s.ideal = ideal.clone();
                s.entry = entry.clone();
                s.lambda = lambda.clone();
                s.functional = functional.clone();
                s.level = *level;
                s.tmin = *tmin;
                s.tmax = *tmax;
                s.samples = *samples;
                s.grid = grid.clone();
            }
            Command::Verify { corpus } => s.corpus = corpus.clone(),
        }
        s
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let command = cli.command.name();
    let mut settings = cli.command.settings();
    settings.out = cli.out;
    settings.threads = cli.threads;
    settings.seed = cli.seed;
    settings.sign = cli.sign;
    if let Some(path) = &cli.config {
        settings = settings.or(&Settings::load(path)?);
    }
    let sign = match settings.sign {
        None => FROZEN_SIGN,
        Some(v) => Sign::from_i64(v).ok_or_else(|| usage(format!("sign must be +1 or -1, got {v}")))?,
    };
    settings.sign = Some(sign.as_i8().into());
    settings.seed = Some(settings.seed.unwrap_or(0));
    if let Some(t) = settings.threads {
        if t == 0 {
            return Err(usage("--threads must be positive"));
        }
        // fails only if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    settings.threads = Some(rayon::current_num_threads());
    let config = RunConfig { command, version: VERSION, settings };
    match command {
        "weight" => commands::weight::run(&config),
        "expand" => commands::expand::run(&config, sign),
        "energy" => commands::energy::run(&config),
        _ => commands::verify::run(&config, sign),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            let err = serde_json::json!({ "error": "usage", "exit_code": EXIT_USAGE, "message": msg.trim() });
            eprintln!("{err}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code() as u8)
        }
    }
}
