mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(run::EXIT_USAGE),
            };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run::run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            run::EXIT_USAGE
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
