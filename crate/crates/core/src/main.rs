fn main() -> std::process::ExitCode {
    bellchain::cli::main()
}
