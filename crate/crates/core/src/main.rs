use std::process::ExitCode;

use xdt::cli::{run, Color};

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = run(std::env::args_os(), &mut out, &mut err, Color::from_env());
    ExitCode::from(code as u8)
}
