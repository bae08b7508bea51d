fn main() {
    std::process::exit(structmap::cli::main_with_args(std::env::args_os()));
}
