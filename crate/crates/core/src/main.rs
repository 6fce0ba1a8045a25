fn main() {
    std::process::exit(pathweave::cli::main());
}
