fn main() {
    std::process::exit(rainbow_giant::cli::run(std::env::args_os()));
}
