fn main() {
    std::process::exit(divgap_cli::run(std::env::args_os()));
}
