fn main() {
    std::process::exit(widthlab::cli::main_with_args(std::env::args_os()));
}
