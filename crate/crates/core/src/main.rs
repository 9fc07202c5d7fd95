fn main() {
    std::process::exit(paircorr::cli::run());
}
