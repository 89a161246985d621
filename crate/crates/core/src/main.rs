fn main() {
    std::process::exit(coinkit::cli::main(std::env::args_os()));
}
