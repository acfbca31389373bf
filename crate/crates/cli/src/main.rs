fn main() {
    std::process::exit(hamforge_cli::main_with_std());
}
