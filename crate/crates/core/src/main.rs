fn main() {
    std::process::exit(abcsat::cli::run());
}
