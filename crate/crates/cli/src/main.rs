use clap::Parser;

use monodromy_lab_cli::{configure_threads, run, write_artifact, Cli, CliError, RunConfig};

fn main() {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let cfg = RunConfig::from_cli(cli)?;
    let outcome = run(&cfg)?;
    write_artifact(&cfg, &outcome.artifact)?;
    Ok(outcome.pass)
}
