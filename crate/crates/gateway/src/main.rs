use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let code = ctxforge::run(&argv, &mut input, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
