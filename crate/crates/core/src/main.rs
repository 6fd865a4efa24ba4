fn main() {
    std::process::exit(lineorbit::cli::run());
}
