fn main() {
    std::process::exit(majorize::cli::run());
}
