use clap::Parser;
use housekeeper_service::cli::{self, Args};

#[tokio::main]
async fn main() {
    let args = Args::parse();
    if let Err(e) = cli::run(args).await {
        eprintln!("housekeeper: {e}");
        std::process::exit(e.exit_code());
    }
}
