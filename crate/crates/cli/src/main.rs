use std::process::ExitCode;

use clap::Parser;
use heightlab::cli::commands::split_names;
use heightlab::cli::{bundled_scenario, parse_scenario, run_command, Command, CommandArgs, Scenario};
use heightlab::Error;

/// Heights, orbits, place vectors and field projections over a Galois
/// number field described by a scenario file.
#[derive(Parser, Debug)]
#[command(name = "heightlab", version)]
struct Cli {
    /// height, torsion, orbit, delta, width, vk-bounds, places, fvector,
    /// project, member, decompose, commutes or verify
    command: String,

    /// Element name, or for `verify` a suite name or `all`
    target: Option<String>,

    /// Scenario JSON file, or `bundled:NAME`
    #[arg(long)]
    scenario: Option<String>,

    #[arg(long)]
    element: Option<String>,

    /// Comma separated subfield names
    #[arg(long = "field-list")]
    field_list: Option<String>,

    /// Subfields projected with S (comma separated)
    #[arg(long = "D")]
    fields_d: Option<String>,

    /// Subfields projected with T (comma separated)
    #[arg(long = "E")]
    fields_e: Option<String>,

    /// Embedding precision in bits (overrides HEIGHTLAB_PRECISION)
    #[arg(long)]
    precision: Option<u32>,

    #[arg(long)]
    tolerance: Option<f64>,

    /// Compact single-line JSON
    #[arg(long)]
    json: bool,

    /// Refuse projections whose fields violate the Galois condition
    #[arg(long)]
    strict: bool,
}

fn load(spec: &str, precision: Option<u32>) -> Result<Scenario, Error> {
    if let Some(name) = spec.strip_prefix("bundled:") {
        return bundled_scenario(name, precision);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::InvalidInput(format!("{}: {}", spec, e)))?;
    parse_scenario(&text, precision)
}

fn run(cli: &Cli) -> Result<serde_json::Value, Error> {
    let cmd = Command::from_name(&cli.command)
        .ok_or_else(|| Error::InvalidInput(format!("unknown command '{}'", cli.command)))?;
    if let Some(bits) = cli.precision {
        if !(64..=1 << 16).contains(&bits) {
            return Err(Error::InvalidInput("precision must lie between 64 and 65536 bits".into()));
        }
    }
    let mut args = CommandArgs {
        element: cli.element.clone(),
        field_list: cli.field_list.as_deref().map(split_names).unwrap_or_default(),
        fields_d: cli.fields_d.as_deref().map(split_names).unwrap_or_default(),
        fields_e: cli.fields_e.as_deref().map(split_names).unwrap_or_default(),
        suite: None,
        tolerance: cli.tolerance,
        precision: cli.precision,
        strict: cli.strict,
    };
    if cmd == Command::Verify {
        args.suite = cli.target.clone();
    } else if let Some(t) = &cli.target {
        if args.element.is_some() {
            return Err(Error::InvalidInput("element given twice".into()));
        }
        args.element = Some(t.clone());
    }
    let scenario = cli.scenario.as_deref().map(|s| load(s, cli.precision)).transpose()?;
    run_command(cmd, scenario.as_ref(), &args)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = if cli.json {
                serde_json::to_string(&report)
            } else {
                serde_json::to_string_pretty(&report)
            };
            println!("{}", text.expect("serializable report"));
            // a failed verification is reported like a refusal
            if report.get("passed") == Some(&serde_json::Value::Bool(false)) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let kind = format!("{:?}", e);
            let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
            let report = serde_json::json!({ "error": kind, "message": e.to_string() });
            eprintln!("{}", report);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
