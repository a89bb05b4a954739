fn main() {
    std::process::exit(seedspan::cli::main_with_args(std::env::args_os()));
}
