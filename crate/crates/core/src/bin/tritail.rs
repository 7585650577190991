use clap::Parser;
use tritail::cli::{emit, execute, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(&cli).and_then(|out| emit(&out).map(|_| out.complete)) {
        Ok(true) => {}
        Ok(false) => {
            eprintln!("tritail: some requested computations failed; see the `error` fields");
            std::process::exit(1);
        }
        Err(e) => {
            eprintln!("tritail: {e}");
            std::process::exit(2);
        }
    }
}
