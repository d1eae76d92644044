//! Library side of the `tate` command-line tool.

pub mod args;
pub mod config;
pub mod dispatch;
pub mod emit;
pub mod error;
pub mod parse;

use clap::Parser;

use crate::args::Cli;
use crate::config::{ConfigFile, Settings};
use crate::emit::ResultDocument;
use crate::error::CliError;

/// Parses `argv`, resolves settings and runs the command.
pub fn run<I, T>(argv: I) -> Result<(ResultDocument, Settings), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    run_parsed(&cli)
}

pub fn run_parsed(cli: &Cli) -> Result<(ResultDocument, Settings), CliError> {
    let file = match &cli.global.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let settings = Settings::resolve(&cli.global.overrides(), &file)?;
    let doc = dispatch::dispatch(&cli.command, &settings)?;
    Ok((doc, settings))
}
