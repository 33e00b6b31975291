//! Command-line driver for the `checkerboard` crate.
//!
//! ```text
//! checkerboard <simulate|verify|converge|path-sum|chain> [--config FILE] [--KEY VALUE]...
//! ```
//!
//! Settings come from the built-in defaults, then the config file, then the
//! flags. `CHECKERBOARD_THREADS` fixes the worker count (unset or `0` lets
//! rayon decide). Exit status is 0 on success, 1 when `verify` finds a
//! failing check, and 2 for configuration errors.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use config::{CommandName, RunConfig, KEYS};
use error::CliError;

/// Environment variable holding the worker-thread count.
pub const THREADS_VAR: &str = "CHECKERBOARD_THREADS";

fn subcommand(name: CommandName) -> Command {
    let mut cmd = Command::new(name.as_str())
        .about(name.about())
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("read `key = value` settings from FILE before applying flags"),
        )
        .arg(
            Arg::new("write-config")
                .long("write-config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("write the resolved settings to FILE, then run"),
        );
    for key in KEYS {
        let mut arg = Arg::new(key.name)
            .long(key.name)
            .value_name("VALUE")
            .help(key.help)
            .action(ArgAction::Set)
            .allow_hyphen_values(true);
        if key.name == "unit-straight" {
            arg = arg
                .num_args(0..=1)
                .default_missing_value("true")
                .allow_hyphen_values(false);
        }
        cmd = cmd.arg(arg);
    }
    cmd
}

pub fn cli() -> Command {
    CommandName::ALL.iter().fold(
        Command::new("checkerboard")
            .about("Checkerboard lattice walks, their continuum limit, and the Dirac chain")
            .version(env!("CARGO_PKG_VERSION"))
            .subcommand_required(true)
            .arg_required_else_help(true),
        |cmd, &name| cmd.subcommand(subcommand(name)),
    )
}

/// Defaults, then the config file, then the flags.
pub fn resolve(name: CommandName, matches: &ArgMatches) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = matches.get_one::<PathBuf>("config") {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config
            .apply_text(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    }
    config.command = name;
    for key in KEYS {
        if let Some(value) = matches.get_one::<String>(key.name) {
            config.set(key.name, value)?;
        }
    }
    Ok(config)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        CliError::Config(format!("{THREADS_VAR} must be a non-negative integer, got `{raw}`"))
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("{THREADS_VAR}: {e}")))?;
    }
    Ok(())
}

pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        CommandName::Simulate => commands::simulate::run(config),
        CommandName::Verify => commands::verify::run(config),
        CommandName::Converge => commands::converge::run(config),
        CommandName::PathSum => commands::path_sum::run(config),
        CommandName::Chain => commands::chain::run(config),
    }
}

fn run_matches(matches: &ArgMatches) -> Result<(), CliError> {
    let (sub, sub_matches) = matches
        .subcommand()
        .ok_or_else(|| CliError::Config("missing subcommand".into()))?;
    let name = CommandName::ALL
        .into_iter()
        .find(|c| c.as_str() == sub)
        .ok_or_else(|| CliError::Config(format!("unknown subcommand `{sub}`")))?;
    let config = resolve(name, sub_matches)?;
    if let Some(path) = sub_matches.get_one::<PathBuf>("write-config") {
        fs::write(path, config.to_text())?;
    }
    configure_threads()?;
    execute(&config)
}

/// Parses `args` (program name first), runs, and maps the outcome to an
/// exit status. Errors go to stderr.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run_matches(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        // the reader went away, as with `| head`
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> ExitCode {
    run_from(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        cli().debug_assert();
    }

    #[test]
    fn flags_override_defaults() {
        let matches = cli()
            .try_get_matches_from([
                "checkerboard", "simulate", "--unit-straight", "--dt", "-0.25", "--source-dir", "-",
            ])
            .unwrap();
        let (_, sub) = matches.subcommand().unwrap();
        let config = resolve(CommandName::Simulate, sub).unwrap();
        assert_eq!(config.dt, -0.25);
        assert_eq!(config.source_dir, checkerboard::lattice::Direction::Minus);
        assert!(config.unit_straight);
        assert_eq!(config.sites, RunConfig::default().sites);
    }

    #[test]
    fn bad_values_name_the_flag() {
        let matches = cli()
            .try_get_matches_from(["checkerboard", "simulate", "--sites", "many"])
            .unwrap();
        let (_, sub) = matches.subcommand().unwrap();
        let err = resolve(CommandName::Simulate, sub).unwrap_err();
        assert!(err.to_string().contains("sites"), "{err}");
    }
}
