use clap::Parser;
use conewise::cli::{run, Cli, EXIT_INPUT};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            std::process::exit(EXIT_INPUT);
        }
        Err(e) => e.exit(),
    };
    std::process::exit(run(&cli));
}
