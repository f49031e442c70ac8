use clap::Parser;

fn main() {
    let cli = qimc_cli::cli::Cli::parse();
    if let Err(err) = qimc_cli::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
