mod args;
mod commands;
mod grid;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Common};
use commands::CliError;

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Numeric(format!("stdout: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sweep(a) => emit(&a.common, &commands::sweep(a)?.render(a.common.format, "sweep")),
        Command::Noisy(a) => emit(&a.common, &commands::noisy(a)?.render(a.common.format, "noisy")),
        Command::Resources(a) => emit(&a.common, &commands::resources(a)?.render(a.common.format, "resources")),
        Command::Decompose(a) => emit(&a.common, &commands::decompose(a)?),
        Command::Pie(a) => emit(&a.common, &commands::pie_table(a)?.render(a.common.format, "pie")),
        Command::Converge(a) => emit(&a.common, &commands::converge(a)?.render(a.common.format, "converge")),
    }
}

fn main() -> ExitCode {
    let argv = match args::expand_config(std::env::args_os().collect()) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("cvrx: {msg}");
            return ExitCode::from(2);
        }
    };
    // clap exits with 2 on usage errors, 0 for --help/--version
    let cli = Cli::parse_from(argv);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("cvrx: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("cvrx: {msg}");
            ExitCode::from(1)
        }
    }
}
