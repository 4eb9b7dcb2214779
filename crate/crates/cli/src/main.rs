use clap::Parser;
use hotbang_cli::{run, Args};

fn main() {
    let args = Args::parse();
    std::process::exit(run(&args));
}
