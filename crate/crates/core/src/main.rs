fn main() {
    std::process::exit(sharpk::cli::main_with_args(std::env::args_os()));
}
