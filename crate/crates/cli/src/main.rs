use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(morekg_cli::run(std::env::args_os()))
}
