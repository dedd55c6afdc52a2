fn main() {
    std::process::exit(patmatch::cli::run());
}
