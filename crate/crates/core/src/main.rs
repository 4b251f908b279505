use clap::Parser;

use paired_roots::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli);
    print!("{}", outcome.render());
    if outcome.exit_code == 2 {
        if let Some(msg) = outcome.payload.first().and_then(|d| d.get("error")) {
            eprintln!("error: {}", msg.as_str().unwrap_or_default());
        }
    }
    std::process::exit(outcome.exit_code);
}
