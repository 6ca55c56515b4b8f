use clap::Parser;
use lensdet_cli::args::Cli;

fn main() {
    std::process::exit(lensdet_cli::run(Cli::parse()));
}
