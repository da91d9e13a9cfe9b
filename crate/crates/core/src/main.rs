fn main() {
    std::process::exit(qnlse::cli::run(std::env::args_os()));
}
