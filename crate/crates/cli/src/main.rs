fn main() {
    std::process::exit(qcrb_cli::run(std::env::args_os()));
}
