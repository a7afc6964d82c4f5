use clap::Parser;

fn main() {
    let cli = fspde::cli::Cli::parse();
    std::process::exit(fspde::cli::run(cli));
}
