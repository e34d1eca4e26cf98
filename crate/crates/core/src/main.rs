fn main() {
    std::process::exit(ising_chi::cli::run());
}
