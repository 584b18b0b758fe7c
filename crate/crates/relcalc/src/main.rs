use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(relcalc::cli::run(std::env::args_os()))
}
