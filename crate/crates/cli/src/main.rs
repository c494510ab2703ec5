use clap::Parser;
use gnfi_cli::{commands, Cli};

fn main() {
    let cli = Cli::parse();
    match commands::dispatch(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
