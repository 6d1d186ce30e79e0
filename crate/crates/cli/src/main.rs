//! `piq`: list, verify, sweep and study the identity catalog.

mod output;

use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use piq_core::numerics::{parse_rational, RBig, MIN_PRECISION};
use piq_core::registry::{
    aggregate_exit_code, committed_draws, generate_draws, limit_study, sweep_q, verify, verify_all_from, verify_draws_from,
    Catalog, Family, Filter, IdentityParams, VerifyOptions, DEFAULT_LADDER, DRAWS_PER_IDENTITY,
};
use piq_core::Exact;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "piq", version, about = "High-precision checks of double series for pi and their q-analogues")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 192)]
    precision_bits: usize,

    /// Summation tolerance, e.g. 1e-30 or 1/1000.
    #[arg(long, global = true, default_value = "1e-30")]
    tol: String,

    #[arg(long, global = true, default_value_t = 20_000)]
    max_terms: usize,

    /// Base q as a decimal or p/r literal; a comma-separated list for `sweep`.
    #[arg(long, global = true)]
    q: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Exact rational arithmetic for terminating identities.
    #[arg(long, global = true)]
    rational: bool,

    /// Catalog filter clause key=value (keys: family, status, id); repeatable.
    #[arg(long, global = true)]
    filter: Vec<String>,

    /// Regenerate parameter draws from this seed instead of the committed set.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Identity parameter key=value (a, b, c, d, e, f, n); repeatable.
    #[arg(long = "param", global = true)]
    params: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the catalog.
    List,
    /// Verify one identity.
    Verify { id: String },
    /// Verify every catalog entry that matches the filter.
    VerifyAll,
    /// Verify a q-identity at each value given with --q.
    Sweep { id: String },
    /// Compare a q-series with its classical limit on q = 1 - 2^-j.
    Limit {
        pair: String,
        /// Ladder exponents j, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LADDER)]
        ladder: Vec<u32>,
    },
}

struct Config {
    opts: VerifyOptions,
    format: Format,
}

fn check_base(literal: &str) -> anyhow::Result<RBig> {
    let q = parse_rational(literal).with_context(|| format!("bad q `{literal}`"))?;
    let e = Exact::new(q.clone());
    if e.sign() != std::cmp::Ordering::Greater || e >= Exact::from_int(1) {
        bail!("q must satisfy 0 < q < 1, got {literal}");
    }
    Ok(q)
}

fn config(cli: &Cli) -> anyhow::Result<Config> {
    if cli.precision_bits < MIN_PRECISION {
        bail!("precision must be at least {MIN_PRECISION} bits");
    }
    let tol = parse_rational(&cli.tol).with_context(|| format!("bad tolerance `{}`", cli.tol))?;
    if Exact::new(tol.clone()).sign() != std::cmp::Ordering::Greater {
        bail!("tolerance must be positive");
    }
    if cli.max_terms == 0 {
        bail!("max-terms must be positive");
    }
    let opts = VerifyOptions { tol, max_terms: cli.max_terms, precision: cli.precision_bits, rational: cli.rational };
    Ok(Config { opts, format: cli.format })
}

/// `--param` pairs plus a single `--q`.
fn params(cli: &Cli) -> anyhow::Result<IdentityParams> {
    let mut p = IdentityParams::parse_pairs(cli.params.iter().map(String::as_str))?;
    if p.contains("q") {
        bail!("give q with --q, not --param");
    }
    if let Some(q) = &cli.q {
        p.set_rational("q", check_base(q)?);
    }
    Ok(p)
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    let cfg = config(cli)?;
    let catalog = Catalog::load()?;
    let filter = Filter::parse(cli.filter.iter().map(String::as_str))?;
    let draws = match cli.seed {
        Some(seed) => generate_draws(seed, DRAWS_PER_IDENTITY),
        None => committed_draws()?,
    };
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::List => {
            output::write_catalog(&mut out, &catalog.filter(&filter), cfg.format)?;
            Ok(0)
        }
        Command::Verify { id } => {
            let spec = catalog.get(id)?;
            let p = params(cli)?;
            let reports = if spec.family == Family::Terminating && p.is_empty() {
                verify_draws_from(&catalog, id, &cfg.opts, &draws)?
            } else {
                vec![verify(&catalog, id, &p, &cfg.opts)?]
            };
            output::write_reports(&mut out, &reports, cfg.format)?;
            Ok(aggregate_exit_code(&reports))
        }
        Command::VerifyAll => {
            let reports = verify_all_from(&catalog, &filter, &params(cli)?, &cfg.opts, Some(&draws));
            output::write_reports(&mut out, &reports, cfg.format)?;
            Ok(aggregate_exit_code(&reports))
        }
        Command::Sweep { id } => {
            let list = cli.q.as_deref().context("sweep needs --q with one or more values")?;
            let qs = list.split(',').map(|s| check_base(s.trim())).collect::<anyhow::Result<Vec<_>>>()?;
            let p = IdentityParams::parse_pairs(cli.params.iter().map(String::as_str))?;
            let reports = sweep_q(&catalog, id, &qs, &p, &cfg.opts)?;
            output::write_reports(&mut out, &reports, cfg.format)?;
            Ok(aggregate_exit_code(&reports))
        }
        Command::Limit { pair, ladder } => {
            let study = limit_study(pair, ladder, &cfg.opts)?;
            output::write_limit(&mut out, &study, cfg.format)?;
            Ok(study.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
