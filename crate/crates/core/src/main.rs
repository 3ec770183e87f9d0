fn main() {
    std::process::exit(toricq::cli::main_with_args(std::env::args_os()));
}
