use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hvdc_mc_cli::{run, CliError, Mode, RunConfig};

/// Thevenin tracking and emergency capacity estimation for LCC-HVDC links.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Run configuration (TOML with dotted section keys).
    #[arg(long)]
    config: PathBuf,
    /// Overrides `mode` from the configuration.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides `paths.out`, defaults to `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    let mode = args.mode.or(cfg.mode).ok_or_else(|| {
        CliError::Config("no mode given on the command line or in the config".into())
    })?;
    let out = args
        .out
        .clone()
        .or_else(|| cfg.paths.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let art = run(&cfg, mode, &out)?;
    for path in &art.written {
        println!("wrote {}", path.display());
    }
    if let Some(last) = art.results.last() {
        println!(
            "t = {:.3} s: capacity {:.1} MW bound by {}",
            last.t, last.mc_power, last.binding
        );
    }
    if let Some(plan) = &art.plan {
        for (k, e) in plan.entries.iter().enumerate() {
            println!("link {k}: {:.1} MW -> {:.1} MW", e.initial, e.target);
        }
        println!(
            "remaining margin {:.1} MW, deficit {:.1} MW",
            plan.remaining_margin, plan.deficit
        );
    }
    Ok(())
}
