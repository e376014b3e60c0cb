use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(kdv_airy::cli::main_with_args(std::env::args_os()))
}
