fn main() -> std::process::ExitCode {
    spinshape::cli::main()
}
