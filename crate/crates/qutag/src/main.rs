fn main() {
    std::process::exit(qutag::cli::run());
}
