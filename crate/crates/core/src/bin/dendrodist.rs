fn main() {
    std::process::exit(dendrodist::cli::run(std::env::args_os()));
}
