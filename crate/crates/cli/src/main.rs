fn main() -> std::process::ExitCode {
    checkerboard_cli::run()
}
