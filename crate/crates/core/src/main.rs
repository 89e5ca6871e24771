fn main() {
    std::process::exit(deltagreen::cli::main_with_args(std::env::args_os()));
}
