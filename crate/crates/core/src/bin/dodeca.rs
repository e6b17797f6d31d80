fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(dodeca_core::cli::main_with_args(std::env::args_os()))
}
