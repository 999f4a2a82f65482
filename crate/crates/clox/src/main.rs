use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(clox::LOG_ENV, "warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = clox::Cli::parse();
    std::process::exit(clox::run(&cli));
}
