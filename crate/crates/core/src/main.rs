fn main() {
    std::process::exit(fairdist::cli::main_with_args(std::env::args_os()));
}
