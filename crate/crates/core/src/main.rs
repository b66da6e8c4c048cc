use std::process::ExitCode;

use clap::Parser;

use framekit::cli::{self, Cli, RunConfig};

fn run() -> Result<i32, framekit::Error> {
    let cli = Cli::parse();
    let env = std::env::var(cli::MAX_DIM_ENV).ok();
    let max_dim = cli::max_dim_from(env.as_deref())?;
    let cfg = RunConfig::from_cli(cli, max_dim)?;
    let outcome = cli::execute(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.output)?,
        None => print!("{}", outcome.output),
    }
    if outcome.exit_code == 3 {
        eprintln!("error: analytic and numeric results disagree (see reconciliation)");
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
