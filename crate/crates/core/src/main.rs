fn main() {
    std::process::exit(pickands::cli::main_with_args(std::env::args_os()));
}
