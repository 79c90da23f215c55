fn main() {
    std::process::exit(cone_gap::cli::main_with_args(std::env::args_os()));
}
