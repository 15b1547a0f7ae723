fn main() {
    std::process::exit(cubictheta::cli::run());
}
