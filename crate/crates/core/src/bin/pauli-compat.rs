fn main() {
    std::process::exit(pauli_compat::cli::main());
}
