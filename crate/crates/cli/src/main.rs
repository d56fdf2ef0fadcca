fn main() {
    std::process::exit(skewflow_cli::run(std::env::args_os()));
}
