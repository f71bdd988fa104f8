fn main() {
    std::process::exit(tfi::cli::main());
}
