fn main() {
    std::process::exit(clab::cli::main());
}
