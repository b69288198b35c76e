use clap::Parser;
use progc_cli::{execute, Cli};

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match execute(cli, &argv) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("progc: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
