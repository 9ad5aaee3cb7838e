//! `cylcover`: verification suites and single-body commands.
//!
//! Exit status 0 when every check passes, 1 on assertion failures and 2 on
//! usage, input or resource errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use cylcover::analysis::{dk_upper, mean_widths, sd};
use cylcover::cylinders::{check_cover_with, crv, crv_sum_lower_bound, CoverCheckOptions};
use cylcover::experiments::{run_suite, SuiteConfig, SUITES};
use cylcover::flats::{min_flat_cover_exact, min_flat_cover_greedy};
use cylcover::io::{cylinders_from_json, read_body, report_json, CoverSolutionJson};
use cylcover::lattice::{enumerate_with_mode, is_lattice_free, lattice_width, to_vector, Freeness};
use cylcover::{ConvexBody, Error, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "cylcover",
    version,
    about = "Cylinder covers, lattice widths and flat covers of lattice points",
    after_help = "Suites: rs, bang-density, covcyl, covcyl-ellipsoid, remark2, covlat-ellipsoid, plank-witness, flatness-ellipsoid"
)]
struct Cli {
    /// Suite name (or `suite NAME`), or one of: crv, cover, width, sd, meanwidth
    command: String,
    /// Suite name after `suite`
    name: Option<String>,
    /// Body JSON file
    #[arg(long)]
    body: Option<PathBuf>,
    /// Cylinder JSON file (one object or an array), for `crv`
    #[arg(long)]
    cylinders: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Write the result here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Flat dimension for `cover`
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Use the exact solver for `cover` (greedy otherwise)
    #[arg(long)]
    exact: bool,
    /// Also write the JSON result of `cover` to this file
    #[arg(long)]
    report: Option<PathBuf>,
    /// Whether boundary lattice points count
    #[arg(long, default_value = "closed", value_parser = parse_freeness)]
    freeness: Freeness,
    /// Sphere samples for `meanwidth`
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

fn parse_freeness(s: &str) -> Result<Freeness, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Output {
    json: String,
    csv: String,
    text: String,
    pass: bool,
}

fn body(cli: &Cli) -> Result<ConvexBody, Error> {
    let path = cli
        .body
        .as_ref()
        .ok_or_else(|| Error::Usage(format!("`{}` needs --body FILE", cli.command)))?;
    read_body(path)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a flat JSON object as a one-row CSV table and as aligned text.
fn record(map: BTreeMap<String, Value>, pass: bool) -> Output {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(map.keys()).expect("csv header");
    w.write_record(map.values().map(cell)).expect("csv row");
    let csv = String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8");
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0) + 2;
    let text = map
        .iter()
        .map(|(k, v)| format!("{k:<width$}{}\n", cell(v)))
        .collect();
    Output {
        json: report_json(&map),
        csv,
        text,
        pass,
    }
}

fn object(v: Value) -> BTreeMap<String, Value> {
    match v {
        Value::Object(m) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}

fn cmd_suite(cli: &Cli, name: &str) -> Result<Output, Error> {
    let t = Instant::now();
    let mut rep = run_suite(
        name,
        &SuiteConfig {
            trials: cli.trials,
            d: cli.d,
            seed: cli.seed,
        },
    )?;
    let json = rep.to_json();
    let csv = rep.to_csv();
    rep.runtime_ms = Some(t.elapsed().as_millis() as u64);
    Ok(Output {
        json,
        csv,
        text: rep.to_text(),
        pass: rep.all_passed(),
    })
}

fn cmd_crv(cli: &Cli) -> Result<Output, Error> {
    let k = body(cli)?;
    let path = cli
        .cylinders
        .as_ref()
        .ok_or_else(|| Error::Usage("`crv` needs --cylinders FILE".into()))?;
    let cyls = cylinders_from_json(&std::fs::read_to_string(path)?)?;
    let values = cyls.iter().map(|c| crv(&k, c)).collect::<Result<Vec<f64>, _>>()?;
    let sum: f64 = values.iter().sum();
    let bound = crv_sum_lower_bound(&k, &cyls);
    let mut opts = CoverCheckOptions::for_dim(k.dim());
    opts.seed = cli.seed;
    let cover = check_cover_with(&k, &cyls, &opts)?;
    let pass = cover.covered && sum >= bound - 1e-9;
    Ok(record(
        object(json!({
            "crv": values,
            "sum_crv": sum,
            "bound": bound,
            "covered": cover.covered,
            "witness": cover.witness,
            "samples_tested": cover.samples_tested,
            "pass": pass,
        })),
        pass,
    ))
}

fn cmd_cover(cli: &Cli) -> Result<Output, Error> {
    let k = body(cli)?;
    if cli.k == 0 || cli.k >= k.dim() {
        return Err(Error::Usage(format!("--k must be in 1..{}", k.dim())));
    }
    let pts: Vec<Vector> = enumerate_with_mode(&k, cli.freeness)?.iter().map(|p| to_vector(p)).collect();
    let t = Instant::now();
    let mut sol = if cli.exact {
        min_flat_cover_exact(&pts, cli.k)?
    } else {
        min_flat_cover_greedy(&pts, cli.k)?
    };
    sol.stats.runtime_ms = Some(t.elapsed().as_millis() as u64);
    let solution = serde_json::to_value(CoverSolutionJson::from(&sol)).expect("solution serializes");
    let mut map = object(solution);
    map.insert("points".into(), json!(pts.len()));
    map.insert("freeness".into(), json!(cli.freeness));
    let out = record(map, true);
    if let Some(path) = &cli.report {
        std::fs::write(path, &out.json)?;
    }
    Ok(out)
}

fn cmd_width(cli: &Cli) -> Result<Output, Error> {
    let k = body(cli)?;
    let w = lattice_width(&k)?;
    Ok(record(
        object(json!({
            "width": w.width,
            "direction": w.direction,
            "freeness": cli.freeness,
            "lattice_free": is_lattice_free(&k, cli.freeness)?,
        })),
        true,
    ))
}

fn cmd_sd(cli: &Cli) -> Result<Output, Error> {
    let k = body(cli)?;
    let a = sd(&k)?;
    Ok(record(
        object(json!({
            "sd": a.sd,
            "center": a.center,
            "achieved_at_origin": a.achieved_at_origin,
            "dk_upper": dk_upper(&k)?,
        })),
        true,
    ))
}

fn cmd_meanwidth(cli: &Cli) -> Result<Output, Error> {
    let k = body(cli)?;
    let r = mean_widths(&k, cli.samples, cli.seed)?;
    Ok(record(object(serde_json::to_value(&r).expect("result serializes")), true))
}

fn run(cli: &Cli) -> Result<Output, Error> {
    if cli.name.is_some() && cli.command != "suite" {
        return Err(Error::Usage(format!("unexpected argument after `{}`", cli.command)));
    }
    match cli.command.as_str() {
        "crv" => cmd_crv(cli),
        "cover" => cmd_cover(cli),
        "width" => cmd_width(cli),
        "sd" => cmd_sd(cli),
        "meanwidth" => cmd_meanwidth(cli),
        "suite" => {
            let name = cli
                .name
                .as_deref()
                .ok_or_else(|| Error::Usage(format!("`suite` needs a name: {}", SUITES.join(", "))))?;
            cmd_suite(cli, name)
        }
        name => cmd_suite(cli, name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        Format::Json => &out.json,
        Format::Csv => &out.csv,
        Format::Text => &out.text,
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if out.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
