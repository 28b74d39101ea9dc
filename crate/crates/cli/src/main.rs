use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use entropart_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ENTROPART_LOG")).init();

    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = out.flush();
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
