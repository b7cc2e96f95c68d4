fn main() -> std::process::ExitCode {
    farey_laurent::cli::main()
}
