fn main() {
    std::process::exit(syllog::cli::run(std::env::args().skip(1)));
}
