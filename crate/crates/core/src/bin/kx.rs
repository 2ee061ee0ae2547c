fn main() {
    std::process::exit(invariant_ring::cli::main());
}
