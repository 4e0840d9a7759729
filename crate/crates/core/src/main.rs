fn main() {
    std::process::exit(spinpair::cli::main_with_args(std::env::args_os()));
}
