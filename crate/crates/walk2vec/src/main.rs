use clap::Parser;
use walk2vec::cli::{run, Cli};
use walk2vec::error::exit;
use walk2vec::ExperimentError;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        let code = if let Some(e) = err.downcast_ref::<ExperimentError>() {
            e.exit_code()
        } else if let Some(e) = err.downcast_ref::<walk2vec_core::Error>() {
            match e {
                walk2vec_core::Error::ResampleLimit { .. } => exit::GENERATION,
                walk2vec_core::Error::InvalidParameter(_) => exit::CONFIG,
                _ => exit::NUMERICAL,
            }
        } else {
            exit::OTHER
        };
        std::process::exit(code);
    }
}
