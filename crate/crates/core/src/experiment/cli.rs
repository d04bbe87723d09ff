//! Command-line front end: `generate`, `sweep` and `verify`.
//!
//! Exit status: 0 on success (and for `--help`/`--version`), 1 on usage or
//! configuration errors, 2 on I/O and input-file errors, 3 when `verify`
//! finds a failing check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use super::sweep::in_pool;
use super::{emit_report, parse_bandwidths, run_sweep, ChannelSource, SweepConfig};
use crate::chanmodel::{generate, write_cir_file, ClusterModelParams};
use crate::error::{Error, Result};
use crate::oracle::suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wbsync",
    version,
    about = "Sampling-phase penalty of bandlimited receivers over multipath channels",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate channel realizations and write them as a CIR file
    Generate(GenerateArgs),
    /// Run the penalty sweep and write per-realization and aggregate CSVs
    Sweep(SweepArgs),
    /// Run the oracle checks
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Master seed
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Number of channel realizations
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    /// Bandwidth ladder in Hz: `a..bxk` or a comma-separated list
    #[arg(long, default_value = "4e6..1024e6x2")]
    pub bandwidths: String,
    /// Channel delay spread in seconds
    #[arg(long, default_value_t = 279e-9)]
    pub ds: f64,
    /// Grid oversampling relative to the largest bandwidth
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Output CIR file
    #[arg(long, default_value = "cirs.txt")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Sampling phases per symbol period
    #[arg(long, default_value_t = 4)]
    pub phases: usize,
    /// Read channels from a CIR file instead of generating them
    #[arg(long)]
    pub cir_in: Option<PathBuf>,
    /// Per-realization CSV; the aggregate goes next to it as `<stem>.aggregate.csv`
    #[arg(long, default_value = "penalties.csv")]
    pub out: PathBuf,
    /// Draw one offset per realization and reuse it (scaled) at every bandwidth
    #[arg(long)]
    pub fixed_eps: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Seed for the randomized checks
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Also write the results as CSV
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ChannelArgs {
    fn config(&self) -> Result<SweepConfig> {
        Ok(SweepConfig {
            bandwidths: parse_bandwidths(&self.bandwidths)?,
            realizations: self.realizations,
            master_seed: self.seed,
            oversample: self.oversample,
            delay_spread: self.ds,
            threads: self.threads,
            ..Default::default()
        })
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Parse { .. } | Error::UnsupportedVersion(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().ansi().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_CONFIG
                }
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate(args) => {
            let config = args.channel.config()?;
            config.validate()?;
            if config.bandwidths.is_empty() {
                return Err(Error::Config(
                    "the bandwidth ladder sets the grid; it cannot be empty".into(),
                ));
            }
            let params = ClusterModelParams {
                rng_seed: config.master_seed,
                delay_spread: config.delay_spread,
                ..Default::default()
            };
            let records = in_pool(config.threads, || {
                generate::<f64>(&params, config.realizations, config.grid_step())
            })??;
            write_cir_file(&args.out, &records, config.delay_spread)?;
            let _ = writeln!(
                stderr,
                "wrote {} realizations to {}",
                records.len(),
                args.out.display()
            );
            Ok(EXIT_OK)
        }
        Command::Sweep(args) => {
            let mut config = args.channel.config()?;
            config.phases = args.phases;
            config.fixed_eps = args.fixed_eps;
            config.output_path = Some(args.out.clone());
            if let Some(path) = args.cir_in {
                config.source = ChannelSource::CirFile(path);
            }
            let report = run_sweep::<f64>(&config)?;
            let aggregate = emit_report(&report, &args.out, stdout)?;
            let _ = writeln!(
                stderr,
                "wrote {} and {}",
                args.out.display(),
                aggregate.display()
            );
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let rows = suite::run_all(args.seed)?;
            let _ = write!(stdout, "{}", suite::format_table(&rows));
            if let Some(path) = &args.out {
                std::fs::write(path, suite::to_csv(&rows))
                    .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                let _ = writeln!(stderr, "{failed} check(s) failed");
                return Ok(EXIT_VERIFY);
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("wbsync").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn no_args_prints_help_and_fails() {
        let (code, _, err) = call(&[]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn help_and_version_succeed() {
        assert_eq!(call(&["--help"]).0, EXIT_OK);
        assert_eq!(call(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn config_errors_exit_one() {
        assert_eq!(call(&["sweep", "--phases", "1"]).0, EXIT_CONFIG);
        assert_eq!(call(&["sweep", "--bandwidths", "4e6..x"]).0, EXIT_CONFIG);
        assert_eq!(call(&["sweep", "--bogus"]).0, EXIT_CONFIG);
    }

    #[test]
    fn missing_cir_file_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("none.txt");
        let out = dir.path().join("p.csv");
        let (code, _, err) = call(&[
            "sweep",
            "--cir-in",
            missing.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_IO, "{err}");
    }
}
