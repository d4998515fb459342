use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, err, code) = torwidth_cli::execute(std::env::args_os());
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    ExitCode::from(code as u8)
}
