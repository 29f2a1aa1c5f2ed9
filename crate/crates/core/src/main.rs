fn main() {
    std::process::exit(mixlab::cli::main_with_args(std::env::args_os()));
}
