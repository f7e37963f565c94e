use clap::Parser;
use ldpc_distance_cli::error::{EXIT_INPUT, EXIT_OK};
use ldpc_distance_cli::{execute, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let code = execute(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
