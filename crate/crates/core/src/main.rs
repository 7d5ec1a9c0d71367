fn main() -> std::process::ExitCode {
    ls2::cli::main()
}
