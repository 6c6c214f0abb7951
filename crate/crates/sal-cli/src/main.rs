use std::process::ExitCode;

fn main() -> ExitCode {
    sal_cli::main_with(std::env::args_os())
}
