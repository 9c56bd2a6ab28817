fn main() {
    std::process::exit(obia::cli::main_from_args(std::env::args_os()));
}
