use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;
use lnnreg_cli::commands::{run, Cli};

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stderr().is_terminal()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(&cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let label = if use_color() { "\x1b[31merror\x1b[0m" } else { "error" };
            eprintln!("{label}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
