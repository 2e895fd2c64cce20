fn main() {
    std::process::exit(coxstar::cli::run(std::env::args_os()));
}
