fn main() {
    std::process::exit(nlpulse::cli::main());
}
