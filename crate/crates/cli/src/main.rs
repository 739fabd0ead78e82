//! Batch front end: every library computation as a subcommand with
//! deterministic CSV or JSON output.
//!
//! Exit codes: 0 on success, 1 for command-line usage errors, 2 for
//! computation errors (unreadable files, schema violations, cap overruns).

mod wire;

use std::path::{Path, PathBuf};
use std::process::exit;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use ordlaw_core::counting::{count_series, matula_census, radius_estimate};
use ordlaw_core::ordinal::{matula_decode, matula_encode};
use ordlaw_core::recognizer::{
    asymptotic_probability, builtin_catalog, eval_recognizer, spectrum,
};
use ordlaw_core::selfcheck::run_all;
use ordlaw_core::semilinear::SemilinearSet;
use ordlaw_core::tauberian::{density_series, semilinear_limit, DensityReport};
use ordlaw_core::{Config, Ordinal, Segment};

use wire::{
    limit_csv_rows, part_csv_row, rational, rec_to_wire, report_to_wire, set_to_wire, sig10,
    RecWire, SetWire,
};

/// Path of a JSON file whose fields override the default caps, read at
/// startup when set.
const CONFIG_ENV: &str = "ORDLAW_CONFIG";

#[derive(Parser)]
#[command(name = "ordlaw", version, about = "Counting series, densities and \
limit probabilities over ordinal segments", max_term_width = 80)]
struct Cli {
    /// Output format; overrides the config file (default csv).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Counting series of a segment: elements per norm.
    Count {
        /// Ordinal term such as `w^w`, or a named segment (e0, G0, BH-OT, BH-CT).
        segment: String,
        /// Largest norm to count up to.
        #[arg(long)]
        n: usize,
    },
    /// Radius-of-convergence estimate from trailing coefficient ratios.
    Rho {
        segment: String,
        /// Series length behind the estimate (default from the config).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Exact density series of a semilinear set.
    Density {
        /// Semilinear set JSON file.
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Closed-form limit density of a semilinear set.
    Limit {
        #[arg(long)]
        set: PathBuf,
    },
    /// Accepted spectrum of a recognizer, as a semilinear set.
    Spectrum {
        /// Recognizer JSON file.
        #[arg(long)]
        rec: PathBuf,
        #[arg(long)]
        segment: String,
    },
    /// Density series and closed-form limit of a recognizer's spectrum.
    Prob {
        #[arg(long)]
        rec: PathBuf,
        #[arg(long)]
        segment: String,
        #[arg(long)]
        n: usize,
    },
    /// Prime-tower codes for ordinals below epsilon_0.
    #[command(subcommand)]
    Matula(MatulaCmd),
    /// Built-in recognizers; give a name to dump its JSON.
    Catalog { name: Option<String> },
    /// Run the oracle cross-validation suite.
    Check,
}

#[derive(Subcommand)]
enum MatulaCmd {
    /// Code of an ordinal term.
    Encode { ordinal: String },
    /// Ordinal term of a positive code.
    Decode { code: String },
    /// How many codes in 1..=n land in the segment (and pass the
    /// recognizer, when one is given).
    Census {
        segment: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        rec: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(text) => print!("{}", text),
        Err(e) => {
            eprintln!("error: {:#}", e);
            exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let (config, file_format) = load_config()?;
    let format = cli.format.or(file_format).unwrap_or(Format::Csv);
    match cli.cmd {
        Cmd::Count { segment, n } => cmd_count(&segment, n, format, &config),
        Cmd::Rho { segment, n } => cmd_rho(&segment, n, format, &config),
        Cmd::Density { set, n } => cmd_density(&set, n, format, &config),
        Cmd::Limit { set } => cmd_limit(&set, format, &config),
        Cmd::Spectrum { rec, segment } => cmd_spectrum(&rec, &segment, format, &config),
        Cmd::Prob { rec, segment, n } => cmd_prob(&rec, &segment, n, format, &config),
        Cmd::Matula(m) => match m {
            MatulaCmd::Encode { ordinal } => cmd_encode(&ordinal, format),
            MatulaCmd::Decode { code } => cmd_decode(&code, format, &config),
            MatulaCmd::Census { segment, n, rec } => {
                cmd_census(&segment, n, rec.as_deref(), format, &config)
            }
        },
        Cmd::Catalog { name } => cmd_catalog(name.as_deref(), format),
        Cmd::Check => cmd_check(&config),
    }
}

/// Overrides for the default [`Config`], mirrored field by field, plus the
/// output format.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    truncation_cap: Option<usize>,
    enum_norm_bound: Option<u64>,
    mso_domain_bound: Option<usize>,
    ratio_window: Option<usize>,
    rho_series_len: Option<usize>,
    part_cap: Option<usize>,
    census_cap: Option<u64>,
    lasso_state_cap: Option<usize>,
    spectrum_guard: Option<usize>,
    format: Option<String>,
}

fn load_config() -> Result<(Config, Option<Format>)> {
    let mut config = Config::default();
    let Some(path) = std::env::var_os(CONFIG_ENV) else {
        return Ok((config, None));
    };
    let path = PathBuf::from(path);
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("config file {}", path.display()))?;
    let file: FileConfig = serde_json::from_str(&text)
        .with_context(|| format!("config file {}", path.display()))?;
    macro_rules! overlay {
        ($($field:ident),*) => {
            $(if let Some(v) = file.$field {
                config.$field = v;
            })*
        };
    }
    overlay!(
        truncation_cap,
        enum_norm_bound,
        mso_domain_bound,
        ratio_window,
        rho_series_len,
        part_cap,
        census_cap,
        lasso_state_cap,
        spectrum_guard
    );
    let format = match file.format.as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(other) => bail!(
            "config file {}: unknown format {:?}, expected csv|json",
            path.display(),
            other
        ),
    };
    Ok((config, format))
}

fn parse_segment(s: &str) -> Result<Segment> {
    Segment::parse(s).with_context(|| format!("segment {:?}", s))
}

fn read_set(path: &Path) -> Result<SemilinearSet> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("set file {}", path.display()))?;
    let wire: SetWire = serde_json::from_str(&text)
        .with_context(|| format!("set file {}", path.display()))?;
    wire.into_set()
        .with_context(|| format!("set file {}", path.display()))
}

fn read_recognizer(path: &Path) -> Result<ordlaw_core::recognizer::Recognizer> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("recognizer file {}", path.display()))?;
    let wire: RecWire = serde_json::from_str(&text)
        .with_context(|| format!("recognizer file {}", path.display()))?;
    wire.into_recognizer()
        .with_context(|| format!("recognizer file {}", path.display()))
}

fn json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct CountWire {
    segment: String,
    values: Vec<String>,
}

fn cmd_count(segment: &str, n: usize, format: Format, config: &Config) -> Result<String> {
    let seg = parse_segment(segment)?;
    let series = count_series(&seg, n, config)?;
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (i, v) in series.values.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i, v));
            }
            Ok(out)
        }
        Format::Json => json_line(&CountWire {
            segment: seg.to_string(),
            values: series.values.iter().map(|v| v.to_string()).collect(),
        }),
    }
}

#[derive(Serialize)]
struct RhoWire {
    segment: String,
    n: usize,
    rho: String,
    spread: String,
    window: Vec<String>,
}

fn cmd_rho(segment: &str, n: Option<usize>, format: Format, config: &Config) -> Result<String> {
    let seg = parse_segment(segment)?;
    let n = n.unwrap_or(config.rho_series_len);
    let series = count_series(&seg, n, config)?;
    let est = radius_estimate(&series, config)?;
    match format {
        Format::Csv => Ok(format!(
            "n,{}\nrho,{}\nspread,{}\n",
            n,
            sig10(est.rho),
            sig10(est.spread)
        )),
        Format::Json => json_line(&RhoWire {
            segment: seg.to_string(),
            n,
            rho: sig10(est.rho),
            spread: sig10(est.spread),
            window: est.window.iter().map(|r| sig10(*r)).collect(),
        }),
    }
}

/// `n,density,cesaro` rows; the density cell is empty where the segment has
/// no elements of that norm.
fn series_csv(rep: &DensityReport) -> String {
    let mut out = String::new();
    for (n, v) in rep.values.iter().enumerate() {
        let cell = v.as_ref().map(|q| rational(q)).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", n, cell, rational(&rep.cesaro[n])));
    }
    out
}

fn cmd_density(set: &Path, n: usize, format: Format, config: &Config) -> Result<String> {
    let set = read_set(set)?;
    let rep = density_series(&set, n, config)?;
    match format {
        Format::Csv => Ok(series_csv(&rep)),
        Format::Json => json_line(&report_to_wire(&rep, true)),
    }
}

fn cmd_limit(set: &Path, format: Format, config: &Config) -> Result<String> {
    let set = read_set(set)?;
    let rep = semilinear_limit(&set, config)?;
    match format {
        Format::Csv => Ok(limit_csv_rows(&rep).join("\n") + "\n"),
        Format::Json => json_line(&report_to_wire(&rep, false)),
    }
}

fn cmd_spectrum(rec: &Path, segment: &str, format: Format, config: &Config) -> Result<String> {
    let rec = read_recognizer(rec)?;
    let seg = parse_segment(segment)?;
    let set = spectrum(&rec, &seg, config)?;
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (i, part) in set.parts().iter().enumerate() {
                out.push_str(&part_csv_row(i, part));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => json_line(&set_to_wire(&set)),
    }
}

fn cmd_prob(rec: &Path, segment: &str, n: usize, format: Format, config: &Config) -> Result<String> {
    let rec = read_recognizer(rec)?;
    let seg = parse_segment(segment)?;
    let rep = asymptotic_probability(&rec, &seg, n, config)?;
    match format {
        Format::Csv => Ok(series_csv(&rep) + &limit_csv_rows(&rep).join("\n") + "\n"),
        Format::Json => json_line(&report_to_wire(&rep, true)),
    }
}

#[derive(Serialize)]
struct CodeWire {
    ordinal: String,
    code: String,
}

fn cmd_encode(ordinal: &str, format: Format) -> Result<String> {
    let x: Ordinal = ordinal
        .parse()
        .with_context(|| format!("ordinal {:?}", ordinal))?;
    let code = matula_encode(&x);
    match format {
        Format::Csv => Ok(format!("{}\n", code)),
        Format::Json => json_line(&CodeWire {
            ordinal: x.to_string(),
            code: code.to_string(),
        }),
    }
}

fn cmd_decode(code: &str, format: Format, config: &Config) -> Result<String> {
    let n: BigUint = code
        .parse()
        .map_err(|_| anyhow!("code {:?} is not a decimal integer", code))?;
    if n < BigUint::from(1u32) {
        bail!("codes start at 1");
    }
    // decoding needs the same prime table as a census up to the code
    if n > BigUint::from(config.census_cap) {
        bail!("code {} exceeds the census cap {}", n, config.census_cap);
    }
    let x = matula_decode(&n);
    match format {
        Format::Csv => Ok(format!("{}\n", x)),
        Format::Json => json_line(&CodeWire {
            ordinal: x.to_string(),
            code: n.to_string(),
        }),
    }
}

#[derive(Serialize)]
struct CensusRowWire {
    n: u64,
    below: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    hits: Option<u64>,
}

#[derive(Serialize)]
struct CensusWire {
    segment: String,
    rows: Vec<CensusRowWire>,
}

fn cmd_census(
    segment: &str,
    n: u64,
    rec: Option<&Path>,
    format: Format,
    config: &Config,
) -> Result<String> {
    let seg = parse_segment(segment)?;
    let rec = rec.map(read_recognizer).transpose()?;
    let pred = rec
        .as_ref()
        .map(|r| move |x: &Ordinal| eval_recognizer(r, x));
    let rows = matula_census(
        &seg,
        n,
        pred.as_ref().map(|p| p as &dyn Fn(&Ordinal) -> bool),
        config,
    )?;
    let with_hits = rec.is_some();
    match format {
        Format::Csv => {
            let mut out = String::new();
            for row in &rows {
                if with_hits {
                    out.push_str(&format!("{},{},{}\n", row.n, row.below, row.hits));
                } else {
                    out.push_str(&format!("{},{}\n", row.n, row.below));
                }
            }
            Ok(out)
        }
        Format::Json => json_line(&CensusWire {
            segment: seg.to_string(),
            rows: rows
                .iter()
                .map(|row| CensusRowWire {
                    n: row.n,
                    below: row.below,
                    hits: with_hits.then_some(row.hits),
                })
                .collect(),
        }),
    }
}

#[derive(Serialize)]
struct CatalogRowWire {
    name: String,
    summary: String,
    states: usize,
    level: usize,
    formula: String,
    recognizer: RecWire,
}

fn cmd_catalog(name: Option<&str>, format: Format) -> Result<String> {
    let catalog = builtin_catalog();
    match name {
        // the dump is a loadable recognizer file, so it is always JSON
        Some(name) => {
            let entry = catalog
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| anyhow!("no catalog entry named {:?}", name))?;
            json_line(&rec_to_wire(&entry.recognizer))
        }
        None => match format {
            Format::Csv => {
                let mut out = String::new();
                for e in &catalog {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        e.name,
                        e.recognizer.state_count(),
                        e.recognizer.level(),
                        e.summary
                    ));
                }
                Ok(out)
            }
            Format::Json => {
                let rows: Vec<CatalogRowWire> = catalog
                    .iter()
                    .map(|e| CatalogRowWire {
                        name: e.name.to_owned(),
                        summary: e.summary.to_owned(),
                        states: e.recognizer.state_count(),
                        level: e.recognizer.level(),
                        formula: e.formula.to_string(),
                        recognizer: rec_to_wire(&e.recognizer),
                    })
                    .collect();
                json_line(&rows)
            }
        },
    }
}

fn cmd_check(config: &Config) -> Result<String> {
    let results = run_all(config);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    let mut failed = 0usize;
    for r in &results {
        let mark = if r.passed { "ok  " } else { "FAIL" };
        if !r.passed {
            failed += 1;
        }
        out.push_str(&format!("{} {:width$}  {}\n", mark, r.name, r.detail));
    }
    out.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        results.len(),
        results.len() - failed,
        failed
    ));
    if failed > 0 {
        print!("{}", out);
        bail!("{} of {} checks failed", failed, results.len());
    }
    Ok(out)
}
