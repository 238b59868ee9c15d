fn main() {
    std::process::exit(sokr_cli::run(std::env::args_os()));
}
