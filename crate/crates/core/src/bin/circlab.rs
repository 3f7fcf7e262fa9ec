fn main() {
    std::process::exit(circlab::cli::run_cli(std::env::args_os()));
}
