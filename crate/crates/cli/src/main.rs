use clap::Parser;

fn main() {
    let cli = rsproof_cli::Cli::parse();
    std::process::exit(rsproof_cli::run(cli));
}
