use clap::Parser;

fn main() {
    let cli = subshift_cli::app::Cli::parse();
    std::process::exit(subshift_cli::app::main_with(cli));
}
