fn main() {
    std::process::exit(homflypt::cli::run_std());
}
