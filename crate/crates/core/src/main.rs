fn main() {
    std::process::exit(quantcert::cli::run_cli(std::env::args_os()));
}
