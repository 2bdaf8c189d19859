fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(splitsim::cli_main(&argv));
}
