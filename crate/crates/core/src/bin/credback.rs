fn main() {
    std::process::exit(credback::cli::run_from_env());
}
