use std::process::ExitCode;

use chebias_cli::args::{Cli, Command};
use chebias_cli::error::CliResult;
use chebias_cli::{run, verify};
use clap::Parser;

fn execute(cli: Cli) -> CliResult<bool> {
    if let Command::Verify { checks } = &cli.command {
        let reports = verify::verify(checks)?;
        for r in &reports {
            println!("{}", serde_json::to_string(r)?);
        }
        return Ok(reports.iter().all(|r| r.pass));
    }
    let (kind, experiment) = cli.command.experiment().expect("experiment subcommand");
    let report = run(&experiment.spec(kind)?)?;
    for out in &report.outputs {
        println!("{}.csv ({} rows)", out.stem, out.series.len());
    }
    println!("{}", report.manifest.display());
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(text) = e.explanation() {
                eprintln!("{text}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
