use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gardner_core::RunConfig;

mod commands;
mod error;
mod output;

use error::{io_err, CliError};

#[derive(Parser, Debug)]
#[command(name = "gardner", version, about = "Exact solutions and checks for the semi-discrete Gardner lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the exact solution on the window and time grid.
    Evaluate(Common),
    /// Residual, zero-curvature and (optionally) evolution checks.
    Validate(Common),
    /// Integrate the lattice from the exact data at t0 to t1.
    Evolve(Common),
    /// Label the (a, b) grid, or the configured point, by collision type.
    Classify(Common),
    /// Collision reports for two-soliton runs over the (a, b) grid.
    Sweep(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Integrator step, overrides the config.
    #[arg(long)]
    dt: Option<f64>,
    /// Lattice window as lo:hi.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    /// Time grid as t0:t1:k.
    #[arg(long, value_parser = parse_times, allow_hyphen_values = true)]
    times: Option<(f64, f64, usize)>,
    /// Also run the integrate-vs-exact check (validate only).
    #[arg(long)]
    integrate: bool,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn parse_times(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected t0:t1:k".into());
    }
    let f = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{e}"));
    Ok((f(parts[0])?, f(parts[1])?, parts[2].trim().parse().map_err(|e| format!("{e}"))?))
}

fn load(c: &Common) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&c.config).map_err(io_err(&c.config))?;
    let mut cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", c.config.display())))?;
    if let Some((n_lo, n_hi)) = c.window {
        cfg.window.n_lo = n_lo;
        cfg.window.n_hi = n_hi;
    }
    if let Some((t0, t1, k)) = c.times {
        cfg.times.t0 = t0;
        cfg.times.t1 = t1;
        cfg.times.samples = k;
    }
    if let Some(dt) = c.dt {
        cfg.dt = dt;
    }
    if c.integrate {
        cfg.validate.integrate = true;
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (c, f): (&Common, fn(&RunConfig, &Path, Option<usize>) -> Result<(), CliError>) = match &cli.command {
        Command::Evaluate(c) => (c, commands::evaluate),
        Command::Validate(c) => (c, commands::validate),
        Command::Evolve(c) => (c, commands::evolve),
        Command::Classify(c) => (c, commands::classify),
        Command::Sweep(c) => (c, commands::sweep),
    };
    let cfg = load(c)?;
    output::ensure_dir(&c.out)?;
    f(&cfg, &c.out, c.jobs)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
            eprintln!("{msg}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_window("-30:30"), Ok((-30, 30)));
        assert!(parse_window("30").is_err());
        assert_eq!(parse_times("-2:2:3"), Ok((-2.0, 2.0, 3)));
        assert!(parse_times("0:1").is_err());
        assert!(parse_times("0:1:x").is_err());
    }

    #[test]
    fn hyphenated_values_parse() {
        let cli = Cli::try_parse_from(["gardner", "evaluate", "--config", "c.json", "--window", "-5:5", "--times", "-1:1:3"]).unwrap();
        let Command::Evaluate(c) = cli.command else { panic!() };
        assert_eq!(c.window, Some((-5, 5)));
        assert_eq!(c.times, Some((-1.0, 1.0, 3)));
    }
}
