//! Command-line front end for `rpw-core`. Each subcommand writes its data as
//! CSV with a JSON header line, or as a single JSON document.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::args::{Cli, Command};
use crate::config::{
    load_config, merge_params, parse_params, to_map, BesselGaussParams, DosParams, EnsembleEquivParams, PairCorrParams,
    RpwVerifyParams, RunConfig, SpTimeParams, WallProfileParams, DEFAULT_SEED,
};
use crate::error::CliError;
use crate::output::Document;

pub const TOOL: &str = "rpw";

/// Rendered output of one invocation.
pub struct Outcome {
    pub config: RunConfig,
    pub document: Document,
    pub verification_failed: bool,
}

fn default_params(command: &Command) -> serde_json::Map<String, Value> {
    match command {
        Command::BesselGauss(_) => to_map(&BesselGaussParams::default()),
        Command::WallProfile(_) => to_map(&WallProfileParams::default()),
        Command::PairCorr(_) => to_map(&PairCorrParams::default()),
        Command::EnsembleEquiv(_) => to_map(&EnsembleEquivParams::default()),
        Command::RpwVerify(_) => to_map(&RpwVerifyParams::default()),
        Command::Dos(_) => to_map(&DosParams::default()),
        Command::SpTime(_) => to_map(&SpTimeParams::default()),
    }
}

/// Resolves the configuration and runs the subcommand.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let file = cli.config.as_deref().map(load_config).transpose()?.unwrap_or_default();
    let name = cli.command.name();
    if let Some(s) = &file.subcommand {
        if s != name {
            return Err(CliError::Usage(format!("config is for `{s}`, not `{name}`")));
        }
    }
    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let format = cli.format.or(file.format).unwrap_or_default();
    let base = merge_params(default_params(&cli.command), file.params);
    let params = merge_params(base, cli.command.overrides()?);
    let run = match &cli.command {
        Command::BesselGauss(_) => commands::bessel_gauss(parse_params(&params)?),
        Command::WallProfile(_) => commands::wall_profile(parse_params(&params)?),
        Command::PairCorr(_) => commands::pair_corr(parse_params(&params)?),
        Command::EnsembleEquiv(_) => commands::ensemble_equiv(parse_params(&params)?),
        Command::RpwVerify(_) => commands::rpw_verify(parse_params(&params)?, seed),
        Command::Dos(_) => commands::dos(parse_params(&params)?, seed),
        Command::SpTime(_) => commands::sp_time(parse_params(&params)?),
    }?;
    let config = RunConfig { subcommand: name.into(), seed, format, params: run.params };
    let mut header = json!({
        "tool": TOOL,
        "version": rpw_core::VERSION,
        "subcommand": name,
        "seed": seed,
        "config": config,
    });
    if !cli.reproducible {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        header["timestamp"] = Value::from(now);
    }
    Ok(Outcome {
        config,
        document: Document { header, tables: run.tables, footer: run.footer },
        verification_failed: run.verification_failed,
    })
}

/// Runs and writes the output; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("rpw: {e}");
            return e.exit_code();
        }
    };
    let text = outcome.document.render(outcome.config.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::io(path, e)),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>".as_ref(), e))
        }
    };
    if let Err(e) = written {
        eprintln!("rpw: {e}");
        return e.exit_code();
    }
    if outcome.verification_failed {
        eprintln!("rpw: verification failed (see footer)");
        return 3;
    }
    0
}
