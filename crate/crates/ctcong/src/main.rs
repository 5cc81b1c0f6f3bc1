fn main() {
    std::process::exit(ctcong::cli::run());
}
