mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cat_entropy::entropy::{entropy, gy_consistency, AuteqWord};
use cat_entropy::sl2z::positive_factorize;
use cat_entropy::wire::{self, parse_rational};
use cat_entropy::Error;
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "cat-entropy", version, about = "Entropy of auto-equivalences from their action on Euler lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Read the input JSON from this file (default: standard input).
    #[arg(long, global = true, conflicts_with = "json")]
    input: Option<PathBuf>,

    /// Inline input JSON.
    #[arg(long, global = true)]
    json: Option<String>,

    /// Width of spectral radius enclosures, as `p/q` or a decimal.
    #[arg(long, global = true, default_value = "1/1000000000")]
    tol: String,

    /// Length of growth curves.
    #[arg(long = "n-max", global = true, default_value_t = 200)]
    n_max: usize,

    /// Write the output JSON here (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// a, μ, χ and the matching extended Dynkin type of weight data.
    Invariants,
    /// Entropy report for a word of auto-equivalences.
    Entropy,
    /// Conjugate a hyperbolic SL(2,Z) matrix into a positive word in U and L.
    Factorize,
    /// Run a property suite: gram, twists, serre, riemann-roch, gy, dynkin,
    /// factorize or all.
    Verify { suite: String },
}

/// Process exit status for each error class.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidWeights(_)
        | Error::Dimension(_)
        | Error::Parameter(_)
        | Error::Unsupported(_)
        | Error::NotUnimodular { .. } => 2,
        Error::Inadmissible(_) | Error::NotIsometry | Error::NotGeometric | Error::Orientation => 3,
        Error::Precondition(_) | Error::DegenerateGrowth { .. } => 4,
        Error::Internal(_) => 5,
    }
}

struct Config {
    tol: BigRational,
    n_max: usize,
}

fn read_input(cli: &Cli) -> Result<String, Error> {
    if let Some(s) = &cli.json {
        return Ok(s.clone());
    }
    let mut buf = String::new();
    match &cli.input {
        Some(path) => {
            buf = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?
        }
        None => {
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(buf)
}

fn config(cli: &Cli) -> Result<Config, Error> {
    let tol = parse_rational(&cli.tol)?;
    if tol <= BigRational::zero() || tol > BigRational::one() {
        return Err(Error::Parameter(format!("tolerance must lie in (0, 1], got {}", cli.tol)));
    }
    if cli.n_max == 0 {
        return Err(Error::Parameter("n-max must be at least 1".into()));
    }
    Ok(Config { tol, n_max: cli.n_max })
}

fn cmd_entropy(text: &str, cfg: &Config) -> Result<Value, Error> {
    let input = wire::parse_entropy_input(text)?;
    let word = AuteqWord::new(input.context, input.word)?;
    let report = entropy(&word, &cfg.tol)?;
    let mut out = wire::entropy_json(&report);
    out["growth"] = match gy_consistency(&word, cfg.n_max, &cfg.tol) {
        Ok(g) => json!({
            "n_max": cfg.n_max,
            "s_n_max": g.curve.last().copied(),
            "deviation": g.final_deviation,
        }),
        Err(Error::DegenerateGrowth { n }) => json!({ "degenerate_at": n }),
        Err(e) => return Err(e),
    };
    Ok(out)
}

fn cmd_factorize(text: &str) -> Result<Value, Error> {
    let m = wire::parse_sl2(text)?;
    let w = positive_factorize(&m)?;
    let verified = w.verify(&m);
    if !verified {
        return Err(Error::Internal("factorization failed to reassemble".into()));
    }
    Ok(wire::factorization_json(&w, verified))
}

fn run(cli: &Cli) -> Result<(Value, u8), Error> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Invariants => {
            let w = wire::parse_weights(&read_input(cli)?)?;
            Ok((wire::invariants_json(&w), 0))
        }
        Command::Entropy => Ok((cmd_entropy(&read_input(cli)?, &cfg)?, 0)),
        Command::Factorize => Ok((cmd_factorize(&read_input(cli)?)?, 0)),
        Command::Verify { suite } => {
            let report = verify::run(suite, &cfg.tol, cfg.n_max)?;
            let code = if report.passed() { 0 } else { 5 };
            Ok((report.to_json(), code))
        }
    }
}

fn emit(cli: &Cli, v: &Value) -> Result<(), Error> {
    let line = wire::to_line(v);
    match &cli.out {
        Some(path) => fs::write(path, line)
            .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(line.as_bytes())
            .map_err(|e| Error::Parameter(format!("cannot write output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(v, code)| emit(&cli, &v).map(|_| code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
