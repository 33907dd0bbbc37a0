//! The `evthresh` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::ebh::{
    boost_generic_ad, boost_generic_pr, boost_lcs_ad, boost_lcs_pr, boost_relaxed_pr, ebh_reject,
    BoostResult, Criterion, ExpNull,
};
use crate::error::{Error, Result};
use crate::sim::{format_sig, run_scenario, write_rows, ScenarioConfig, THREADS_ENV};
use crate::tables::Table;
use crate::threshold::{calibrate, threshold, worst_case_error, EClass};

/// Exit status for malformed arguments, configs or inputs.
pub const EXIT_INVALID: i32 = 2;
/// Exit status for I/O failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "evthresh",
    version,
    about = "Improved rejection thresholds for e-values"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest threshold keeping type-I error at alpha for a class.
    Threshold {
        #[arg(long)]
        class: EClass,
        #[arg(long)]
        alpha: f64,
    },
    /// Worst-case probability that a class member reaches 1/gamma.
    WorstCase {
        #[arg(long)]
        class: EClass,
        #[arg(long)]
        gamma: f64,
    },
    /// Smallest valid p-value for an observed e-value.
    Calibrate {
        #[arg(long)]
        class: EClass,
        #[arg(long)]
        e: f64,
    },
    /// Boosting factor for e-BH.
    Boost {
        method: BoostMethod,
        #[arg(long)]
        alpha: f64,
        /// Null distribution of the e-values (generic method only).
        #[arg(long, value_enum, default_value_t = NullArg::Exp1)]
        null: NullArg,
        /// Number of hypotheses.
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = CriterionArg::Full)]
        criterion: CriterionArg,
        /// Dependence regime (generic method only).
        #[arg(long, value_enum, default_value_t = RegimeArg::Ad)]
        regime: RegimeArg,
    },
    /// Run e-BH on a one-column CSV of e-values with header `e`.
    Ebh {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Multiply every e-value by this factor first.
        #[arg(long, default_value_t = 1.0)]
        boost: f64,
    },
    /// Run a Monte Carlo scenario and write its rows as CSV.
    Simulate {
        scenario: String,
        /// JSON config; paper-scale defaults if omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        #[arg(long)]
        replications: Option<u64>,
    },
    /// Regenerate a reference table as CSV.
    Table {
        #[arg(value_parser = ["1", "2", "7"])]
        which: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoostMethod {
    LcsAd,
    LcsPr,
    Generic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NullArg {
    Exp1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CriterionArg {
    Full,
    Relaxed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    Ad,
    Prds,
}

/// Parse `args` (including the program name), run the command and return
/// the process exit status. Results go to `out`, diagnostics to standard
/// error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn print_boost(out: &mut dyn Write, b: &BoostResult) -> Result<()> {
    writeln!(
        out,
        "lower={} upper={} regime={} criterion={} saturated={}",
        format_sig(b.lower),
        format_sig(b.upper),
        match b.regime {
            crate::ebh::Regime::Ad => "ad",
            crate::ebh::Regime::Prds => "prds",
        },
        match b.criterion {
            Criterion::FullT => "full",
            Criterion::Relaxed => "relaxed",
        },
        b.saturated
    )?;
    Ok(())
}

fn read_evalues(path: &PathBuf) -> Result<Vec<f64>> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.len() != 1 || &headers[0] != "e" {
        return Err(Error::Invalid(format!(
            "expected a single column with header `e`, found {headers:?}"
        )));
    }
    let mut e = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = &record[0];
        let x: f64 = field
            .parse()
            .map_err(|_| Error::Invalid(format!("row {}: `{field}` is not a number", line + 1)))?;
        e.push(x);
    }
    Ok(e)
}

fn load_config(scenario: &str, path: Option<&PathBuf>) -> Result<ScenarioConfig> {
    let default = ScenarioConfig::default_for(scenario)?;
    let Some(path) = path else {
        return Ok(default);
    };
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    let mut value: serde_json::Value = serde_json::from_str(&text)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    match obj.get("scenario") {
        None => {
            obj.insert("scenario".into(), default.name().into());
        }
        Some(given) => {
            let given = given
                .as_str()
                .map(ScenarioConfig::default_for)
                .transpose()?;
            if given.map(|c| c.name()) != Some(default.name()) {
                return Err(Error::Config(format!(
                    "config is not for scenario `{}`",
                    default.name()
                )));
            }
            obj.insert("scenario".into(), default.name().into());
        }
    }
    Ok(serde_json::from_value(value)?)
}

fn open_out<'a>(path: Option<&PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Threshold { class, alpha } => {
            let t = threshold(class, alpha)?;
            writeln!(out, "{} kind={}", format_sig(t.value), t.kind)?;
        }
        Command::WorstCase { class, gamma } => {
            let r = worst_case_error(class, gamma)?;
            writeln!(out, "{} kind={}", format_sig(r.value), r.kind)?;
        }
        Command::Calibrate { class, e } => {
            if !(e >= 0.0) {
                return Err(Error::Invalid(format!(
                    "e-value must be nonnegative, got {e}"
                )));
            }
            writeln!(out, "{}", format_sig(calibrate(class, e)))?;
        }
        Command::Boost {
            method,
            alpha,
            null,
            k,
            criterion,
            regime,
        } => {
            let criterion = match criterion {
                CriterionArg::Full => Criterion::FullT,
                CriterionArg::Relaxed => Criterion::Relaxed,
            };
            let result = match method {
                BoostMethod::LcsAd => boost_lcs_ad(alpha)?,
                BoostMethod::LcsPr => boost_lcs_pr(alpha)?,
                BoostMethod::Generic => {
                    let NullArg::Exp1 = null;
                    let dist = ExpNull::default();
                    let need_k = || {
                        k.ok_or_else(|| {
                            Error::Invalid("--K is required for the full criterion".into())
                        })
                    };
                    match (regime, criterion) {
                        (RegimeArg::Ad, Criterion::FullT) => {
                            boost_generic_ad(&dist, alpha, need_k()?, criterion)?
                        }
                        (RegimeArg::Ad, Criterion::Relaxed) => {
                            boost_generic_ad(&dist, alpha, k.unwrap_or(1), criterion)?
                        }
                        (RegimeArg::Prds, Criterion::FullT) => {
                            boost_generic_pr(&dist, alpha, need_k()?)?
                        }
                        (RegimeArg::Prds, Criterion::Relaxed) => boost_relaxed_pr(&dist, alpha)?,
                    }
                }
            };
            print_boost(out, &result)?;
        }
        Command::Ebh {
            input,
            alpha,
            boost,
        } => {
            if !(boost >= 1.0 && boost.is_finite()) {
                return Err(Error::Invalid(format!(
                    "boost must be a finite factor ≥ 1, got {boost}"
                )));
            }
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Invalid(format!(
                    "alpha must lie in (0, 1), got {alpha}"
                )));
            }
            let e = read_evalues(&input)?;
            if e.is_empty() {
                writeln!(out, "discoveries=0")?;
                writeln!(out, "rejected=")?;
                return Ok(());
            }
            let scaled: Vec<f64> = e.iter().map(|x| x * boost).collect();
            let set = ebh_reject(&scaled, alpha)?;
            let ids: Vec<String> = set.rejected.iter().map(ToString::to_string).collect();
            writeln!(out, "discoveries={}", set.len())?;
            writeln!(out, "rejected={}", ids.join(","))?;
        }
        Command::Simulate {
            scenario,
            config,
            out: path,
            seed,
            threads,
            replications,
        } => {
            let mut config = load_config(&scenario, config.as_ref())?;
            if let Some(seed) = seed {
                config.set_seed(seed);
            }
            if let Some(threads) = threads {
                config.set_threads(threads);
            }
            if let Some(r) = replications {
                config.set_replications(r);
            }
            let rows = run_scenario(&config)?;
            let mut w = open_out(path.as_ref(), out)?;
            write_rows(&rows, &mut w)?;
            w.flush()?;
        }
        Command::Table { which, out: path } => {
            let table: Table = which.parse()?;
            let mut w = open_out(path.as_ref(), out)?;
            table.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    run(std::env::args_os(), &mut lock)
}
