use std::process::ExitCode;

use clap::Parser;
use microrisk_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    ExitCode::from(run(&cli, &mut stdout.lock(), &mut stderr.lock()))
}
