use clap::Parser;
use conelab::cli::{run, CliConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cfg = CliConfig::parse();
    let code = run(&cfg, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
