use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(spindiscord::cli::run(std::env::args_os()))
}
