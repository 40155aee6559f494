fn main() {
    std::process::exit(complexkit::cli::main());
}
