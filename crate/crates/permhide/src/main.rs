use clap::Parser;

fn main() {
    let cli = permhide::cli::Cli::parse();
    std::process::exit(permhide::cli::run(cli));
}
