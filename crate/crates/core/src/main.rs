use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thermocalc::cli::commands::{run, Cli};
use thermocalc::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = run(&cli, &mut out);
    let _ = out.flush();
    match status {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("thermocalc: {e}");
            ExitCode::from(match e {
                Error::Usage(_) | Error::Parse { .. } => 2,
                _ => 3,
            })
        }
    }
}
