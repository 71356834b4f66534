use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use urysohn_cli::{execute, render, Cli, CliError, InputKind};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("urysohn: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let input = match (cli.command.input_kind(), &cli.input) {
        (InputKind::None, _) => String::new(),
        (_, Some(path)) => std::fs::read_to_string(path).map_err(|source| io_error(path, source))?,
        (_, None) => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|source| io_error("<stdin>", source))?;
            text
        }
    };
    let outcome = execute(&cli.command, &input)?;
    let text = render(&outcome.document);
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| io_error(path, source))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| io_error("<stdout>", source))?,
    }
    Ok(outcome.exit_code(cli.strict) as u8)
}

fn io_error(path: impl AsRef<std::path::Path>, source: std::io::Error) -> CliError {
    CliError::Io { path: path.as_ref().display().to_string(), source }
}
