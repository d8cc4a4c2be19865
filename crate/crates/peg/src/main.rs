fn main() -> std::process::ExitCode {
    peg::cli::main(std::env::args_os())
}
