use clap::Parser;

use elastic_defects::cli::{run, Args};

fn main() {
    std::process::exit(run(&Args::parse()));
}
