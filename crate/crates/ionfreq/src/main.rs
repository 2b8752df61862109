use clap::Parser;

fn main() {
    let cli = ionfreq::Cli::parse();
    match ionfreq::run(&cli) {
        Ok(written) => {
            for path in written {
                eprintln!("wrote {}", path.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
