use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BINOMAP_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = binomap::cli::Cli::parse();
    match binomap::cli::run(&cli) {
        Ok(report) => {
            binomap::cli::print_report(&cli, &report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("{}", serde_json::to_string(&e.to_json()).expect("serializable"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
