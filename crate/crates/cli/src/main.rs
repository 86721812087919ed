fn main() {
    std::process::exit(ffincidence_cli::run(std::env::args_os()));
}
