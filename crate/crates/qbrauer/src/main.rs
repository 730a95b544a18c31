fn main() {
    std::process::exit(qbrauer::cli::run());
}
