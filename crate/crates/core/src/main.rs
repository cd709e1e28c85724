fn main() {
    std::process::exit(heisdyn::cli::main_with_args(std::env::args_os()));
}
