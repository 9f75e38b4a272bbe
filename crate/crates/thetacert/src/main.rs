use clap::Parser;

use thetacert::cli::{run, Args};

fn main() {
    let args = Args::parse();
    let code = match args.resolve().and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            64
        }
    };
    std::process::exit(code);
}
