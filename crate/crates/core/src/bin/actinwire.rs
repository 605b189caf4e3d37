use clap::Parser;

use actinwire::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => println!("{summary}"),
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("actinwire: error[{}]: {msg}", e.kind());
            std::process::exit(e.exit_code());
        }
    }
}
