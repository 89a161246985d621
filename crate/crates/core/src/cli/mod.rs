//! The `coinkit` command line.
//!
//! ```text
//! coinkit [--seed HEX] [--json] <COMMAND> [ARGS]
//! ```
//!
//! Exit status: 0 on success, 1 when the procedure itself fails (trial budget
//! exhausted, factoring timeout, no prime in range, unsafe key length), 2 on
//! usage errors. Usage errors name the offending flag.
//!
//! ## Seeds
//!
//! Commands that draw random numbers (`eqtest`, `prime`, `area`, `poll`,
//! `balance`) treat `--seed` as the master of a [`SeedStream`] and draw from
//! stream `(command, i)`. For `pairwise`, `extract` and `keyrecover` the seed
//! is the generator seed itself: `k` bits, or the `n + m - 1` Toeplitz
//! diagonals, as big-endian hex. Without `--seed`, fresh entropy comes from
//! the operating system and the seed actually used is printed, so any run can
//! be repeated exactly.
//!
//! ## JSON
//!
//! `--json` prints a single object
//! `{command, version, inputs, seed_used, result}`, with `error` in place of
//! `result` when the procedure fails. The schema ships as
//! `schema/coinkit-output.v1.json`.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bits::BitString;
use crate::numtheory::DEFAULT_ROUNDS;
use crate::sampling::BoundMethod;
use crate::seed::SeedStream;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "coinkit", version, about = "Randomized algorithms with exact oracles")]
pub struct Cli {
    /// Hex seed: the master seed for random draws, or the generator seed for
    /// pairwise, extract and keyrecover.
    #[arg(long, global = true, value_name = "HEX")]
    pub seed: Option<String>,
    /// Print a single JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether two arithmetic expressions are equal by fingerprinting.
    Eqtest(EqtestArgs),
    /// Miller-Rabin test, or a random prime from a range.
    Prime(PrimeArgs),
    /// Factor by trial division.
    Factor(FactorArgs),
    /// Pairwise independent bits from a short seed.
    Pairwise(PairwiseArgs),
    /// Toeplitz extraction of one input under one seed.
    Extract(ExtractArgs),
    /// One input under every seed.
    PrgEnum(PrgEnumArgs),
    /// Distill a shared key that has partly leaked.
    Keyrecover(KeyrecoverArgs),
    /// Monte Carlo area estimate.
    Area(AreaArgs),
    /// Simulate opinion polls.
    Poll(PollArgs),
    /// Samples needed for a given accuracy and confidence.
    Samplesize(SamplesizeArgs),
    /// Random assignment of tasks to machines.
    Balance(BalanceArgs),
}

fn decimal(s: &str) -> Result<String, String> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        Ok(s.to_owned())
    } else {
        Err("expected a nonnegative decimal integer".into())
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v < 1.0 => Ok(v),
        _ => Err("expected a number strictly between 0 and 1".into()),
    }
}

fn probability(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        _ => Err("expected a number between 0 and 1".into()),
    }
}

fn as_string<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct EqtestArgs {
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    /// Minimum number of random prime trials.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    /// Keep testing until the error bound is at most this.
    #[arg(long, default_value_t = 1e-9, value_parser = open_unit)]
    pub target_error: f64,
    /// Give up after this many trials.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_trials: u32,
    /// Skip the modulus-2 check.
    #[arg(long)]
    pub no_precheck: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("mode").required(true).args(["test", "random"])))]
pub struct PrimeArgs {
    /// Test N for primality.
    #[arg(long, value_name = "N", value_parser = decimal)]
    pub test: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ROUNDS, value_parser = clap::value_parser!(u32).range(1..))]
    pub rounds: u32,
    /// Draw a uniform random prime from [LO, HI].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], value_parser = decimal)]
    pub random: Option<Vec<String>>,
}

#[derive(Debug, Args, Serialize)]
pub struct FactorArgs {
    #[arg(value_name = "N")]
    #[serde(serialize_with = "as_string")]
    pub n: u128,
    /// Maximum number of prime candidates to divide by.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BitFormat {
    Hex,
    Text,
}

#[derive(Debug, Args, Serialize)]
pub struct PairwiseArgs {
    /// Seed length in bits; the stream has 2^k - 1 bits.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=63))]
    pub k: u32,
    /// Emit the first N bits [default: the whole stream, for k <= 20].
    #[arg(long, value_name = "N", group = "action")]
    pub emit: Option<u64>,
    /// Check every pair of outputs over every seed.
    #[arg(long, group = "action")]
    pub verify: bool,
    /// Find three outputs that are not jointly uniform.
    #[arg(long, group = "action")]
    pub verify_triple: bool,
    #[arg(long, value_enum, default_value_t = BitFormat::Hex)]
    pub format: BitFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractArgs {
    /// Input length in bits.
    #[arg(long)]
    pub n: usize,
    /// Output length in bits.
    #[arg(long)]
    pub m: usize,
    /// Source sample, big-endian hex.
    #[arg(long, value_name = "HEX")]
    pub input: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PrgEnumArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_name = "HEX")]
    pub input: String,
}

#[derive(Debug, Args, Serialize)]
pub struct KeyrecoverArgs {
    /// The shared key, big-endian hex.
    #[arg(long, value_name = "HEX")]
    pub key: String,
    /// Key length in bits [default: 4 per hex digit].
    #[arg(long)]
    pub key_bits: Option<usize>,
    /// Leaked bit positions, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "POS,...")]
    pub leaked: Vec<usize>,
    /// Output length in bits.
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionName {
    QuarterDisk,
    Box,
    Annulus,
}

#[derive(Debug, Args, Serialize)]
pub struct AreaArgs {
    #[arg(long, value_enum)]
    pub region: RegionName,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 0.95, value_parser = open_unit)]
    pub confidence: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PollArgs {
    /// True fraction of the population answering yes.
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// People asked per poll.
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Number of independent polls.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Margin counted as a hit when summarizing runs.
    #[arg(long, default_value_t = 0.05, value_parser = open_unit)]
    pub epsilon: f64,
    /// Population size. Recorded only: it does not affect the result.
    #[arg(long)]
    pub population: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SamplesizeArgs {
    #[arg(long, value_parser = open_unit)]
    pub eps: f64,
    #[arg(long, value_parser = open_unit)]
    pub delta: f64,
    #[arg(long, default_value = "hoeffding")]
    pub method: BoundMethod,
}

#[derive(Debug, Args, Serialize)]
pub struct BalanceArgs {
    /// Number of unit-length tasks (or the line count of --durations).
    #[arg(long)]
    pub tasks: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub machines: u64,
    /// One nonnegative decimal duration per line.
    #[arg(long, value_name = "FILE")]
    pub durations: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
}

#[derive(Debug)]
pub(crate) enum CliError {
    /// Bad flag value found after parsing; the message names the flag.
    Usage(String),
    /// The procedure ran and failed.
    Domain {
        kind: &'static str,
        message: String,
        detail: Value,
    },
}

pub(crate) fn usage(flag: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid value for {flag}: {e}"))
}

pub(crate) fn domain(kind: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Domain {
        kind,
        message: e.to_string(),
        detail: Value::Null,
    }
}

/// Resolves `--seed` on first use and records what was used.
pub(crate) struct Ctx {
    seed: Option<String>,
    seed_used: Option<String>,
    master: Option<SeedStream>,
}

impl Ctx {
    fn new(seed: Option<String>) -> Self {
        Self {
            seed,
            seed_used: None,
            master: None,
        }
    }

    pub(crate) fn seeds(&mut self) -> Result<SeedStream, CliError> {
        if let Some(m) = &self.master {
            return Ok(m.clone());
        }
        let s = match &self.seed {
            Some(h) => SeedStream::from_hex(h).map_err(|e| usage("--seed", e))?,
            None => SeedStream::from_entropy(),
        };
        self.seed_used = Some(s.to_hex());
        self.master = Some(s.clone());
        Ok(s)
    }

    pub(crate) fn rng(&mut self, label: &str) -> Result<ChaCha20Rng, CliError> {
        Ok(self.seeds()?.stream(label, 0))
    }

    /// `--seed` read directly as a `len`-bit string.
    pub(crate) fn seed_bits(&mut self, len: usize) -> Result<BitString, CliError> {
        let b = match &self.seed {
            Some(h) => BitString::from_hex(h, len)
                .map_err(|e| usage("--seed", format!("{e} (expected {len} bits)")))?,
            None => {
                let mut r = SeedStream::from_entropy().stream("bits", 0);
                BitString::from_bits((0..len).map(|_| r.gen::<bool>()))
            }
        };
        self.seed_used = Some(b.to_hex());
        Ok(b)
    }
}

/// Text and JSON forms of a successful run.
pub(crate) struct Report {
    pub result: Value,
    pub text: String,
}

/// Captured outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command without touching
/// the process's stdout or stderr.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if e.use_stderr() {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

/// Runs the command line and prints its output; returns the exit status.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

fn execute(cli: Cli) -> Output {
    let mut ctx = Ctx::new(cli.seed.clone());
    macro_rules! dispatch {
        ($($variant:ident => $name:literal, $handler:path;)*) => {
            match &cli.command {
                $(Command::$variant(a) => (
                    $name,
                    serde_json::to_value(a).expect("arguments serialize"),
                    $handler(a, &mut ctx),
                ),)*
            }
        };
    }
    let (command, inputs, outcome) = dispatch! {
        Eqtest => "eqtest", commands::eqtest;
        Prime => "prime", commands::prime;
        Factor => "factor", commands::factor;
        Pairwise => "pairwise", commands::pairwise;
        Extract => "extract", commands::extract;
        PrgEnum => "prg-enum", commands::prg_enum;
        Keyrecover => "keyrecover", commands::keyrecover;
        Area => "area", commands::area;
        Poll => "poll", commands::poll;
        Samplesize => "samplesize", commands::samplesize;
        Balance => "balance", commands::balance;
    };
    let seed_line = |s: &Option<String>| {
        s.as_ref()
            .map(|s| format!("seed: {s}\n"))
            .unwrap_or_default()
    };
    let envelope = |key: &str, body: Value| {
        let mut obj = json!({
            "command": command,
            "version": VERSION,
            "inputs": inputs,
            "seed_used": ctx.seed_used,
        });
        obj[key] = body;
        serde_json::to_string_pretty(&obj).expect("valid json") + "\n"
    };
    match outcome {
        Ok(r) if cli.json => Output {
            code: 0,
            stdout: envelope("result", r.result),
            stderr: String::new(),
        },
        Ok(r) => Output {
            code: 0,
            stdout: r.text + &seed_line(&ctx.seed_used),
            stderr: String::new(),
        },
        Err(CliError::Usage(message)) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Err(CliError::Domain {
            kind,
            message,
            detail,
        }) => {
            if cli.json {
                Output {
                    code: 1,
                    stdout: envelope(
                        "error",
                        json!({"kind": kind, "message": message, "detail": detail}),
                    ),
                    stderr: String::new(),
                }
            } else {
                Output {
                    code: 1,
                    stdout: String::new(),
                    stderr: format!("error: {message}\n{}", seed_line(&ctx.seed_used)),
                }
            }
        }
    }
}
