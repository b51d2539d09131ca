use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;
use vekua_forge::cli::{run, Cli};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => ExitCode::from(run(cli) as u8),
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
