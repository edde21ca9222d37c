use clap::Parser;

fn main() {
    let cli = repairlab_cli::Cli::parse();
    std::process::exit(repairlab_cli::run_cli(cli));
}
