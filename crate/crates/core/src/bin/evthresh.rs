fn main() {
    std::process::exit(evthresh::cli::main());
}
