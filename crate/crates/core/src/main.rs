use clap::Parser;

fn main() {
    let cli = wavestab::cli::Cli::parse();
    if let Err(e) = wavestab::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
