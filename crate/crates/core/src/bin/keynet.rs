fn main() {
    std::process::exit(keynet::cli::run(std::env::args_os()));
}
